use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{int, rat, sqrt_bounds, Coord, ModelLine, ModelPoint, ModelSample, Rational};
use crate::checker::DesignatedPair;
use crate::error::{Error, Result};
use crate::structure::{EventId, Structure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub lines: usize,
    pub seed: u64,
    pub bound: Rational,
    /// Extra points placed inside, and on each side outside, the unreachable
    /// interval of every designated pair.
    pub witnesses_per_pair: usize,
}

impl GenConfig {
    pub fn new(lines: usize, seed: u64, bound: Rational) -> Self {
        GenConfig {
            lines,
            seed,
            bound,
            witnesses_per_pair: 2,
        }
    }
}

/// Builds a closed finite sample of the plane model.
///
/// Base lines `L0, L1, …` have pairwise distinct slopes `k/D` in (−1, 1) and
/// cross `t = 0` at `x = B·j/32`. Every pairwise intersection inside the box
/// `|t|, |x| ≤ B` is an event, as are two anchors per line at `t = ±B/2`.
/// Each base line gets one designated external event `b`; its unreachable
/// interval receives `K` interior points and `K` points beyond each end.
/// Finally every timelike point of a designated line that shares no line
/// with `b` is joined to it by a connector line `C0, C1, …`.
pub fn generate_sample(cfg: &GenConfig) -> Result<(ModelSample, Structure)> {
    if cfg.lines < 2 {
        return Err(Error::DegenerateConfig("at least two lines are required".into()));
    }
    if !cfg.bound.is_positive() {
        return Err(Error::DegenerateConfig(format!("bound must be positive, got {}", cfg.bound)));
    }
    if cfg.witnesses_per_pair < 2 {
        return Err(Error::DegenerateConfig("witnesses per pair must be at least 2".into()));
    }
    let b = &cfg.bound;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let den = (cfg.lines as i64).max(16);
    let mut slopes: Vec<i64> = (1 - den..den).collect();
    slopes.shuffle(&mut rng);
    let mut lines: Vec<ModelLine> = slopes[..cfg.lines]
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let j = rng.gen_range(-16i64..=16);
            ModelLine {
                name: format!("L{i}"),
                base: Coord::new(int(0), b * rat(j, 32)),
                dir: Coord::new(int(1), rat(k, den)),
            }
        })
        .collect();

    let in_box = |c: &Coord| c.t.abs() <= *b && c.x.abs() <= *b;
    let mut pts: BTreeSet<Coord> = BTreeSet::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(c) = lines[i].intersect(&lines[j]) {
                if in_box(&c) {
                    pts.insert(c);
                }
            }
        }
    }
    let half = b * rat(1, 2);
    for l in &lines {
        for t in [-half.clone(), half.clone()] {
            pts.insert(l.at(&l.param(&Coord::new(t, Rational::zero()))));
        }
    }

    let mut designated: Vec<(usize, Coord)> = Vec::new();
    for (li, l) in lines.iter().enumerate() {
        let off: Vec<&Coord> = pts.iter().filter(|c| !l.contains(c)).collect();
        let pick = off[rng.gen_range(0..off.len())].clone();
        designated.push((li, pick));
    }

    let k = cfg.witnesses_per_pair as i64;
    for (li, ext) in &designated {
        let l = &lines[*li];
        let (alpha, beta, gamma) = l.quadratic(ext);
        let centre = l.vertex(ext);
        let h2 = (&beta * &beta - int(4) * &alpha * &gamma) / (int(4) * &alpha * &alpha);
        if !h2.is_positive() {
            return Err(Error::DegenerateConfig(format!("empty unreachable interval on {}", l.name)));
        }
        let mut scale = 1024u32;
        let (lo, hi) = loop {
            let (lo, hi) = sqrt_bounds(&h2, scale);
            if lo.is_positive() {
                break (lo, hi);
            }
            scale = scale.saturating_mul(32);
        };
        for j in 1..=k {
            let c = l.at(&(&centre + &lo * rat(2 * j - k - 1, k + 1)));
            debug_assert!(!c.timelike_to(ext));
            pts.insert(c);
        }
        for j in 1..=k {
            let off = &hi * (int(1) + rat(j, k));
            for lambda in [&centre + &off, &centre - &off] {
                let c = l.at(&lambda);
                debug_assert!(c.timelike_to(ext));
                pts.insert(c);
            }
        }
    }

    let points: Vec<ModelPoint> = pts
        .into_iter()
        .enumerate()
        .map(|(i, c)| ModelPoint {
            id: EventId::new(format!("e{i}")).expect("valid token"),
            t: c.t,
            x: c.x,
        })
        .collect();
    let on_line = |l: &ModelLine| -> Vec<usize> {
        let mut v: Vec<usize> = (0..points.len()).filter(|&i| l.contains(&points[i].coord())).collect();
        v.sort_by(|&a, &b| points[a].t.cmp(&points[b].t));
        v
    };
    let mut incidence: Vec<Vec<usize>> = lines.iter().map(&on_line).collect();

    let find = |c: &Coord| points.iter().position(|p| &p.coord() == c).expect("designated point exists");
    let mut pairs = Vec::new();
    let mut connectors = 0usize;
    for (li, ext) in &designated {
        let bi = find(ext);
        pairs.push(DesignatedPair {
            path: lines[*li].name.clone(),
            event: points[bi].id.clone(),
        });
        for xi in incidence[*li].clone() {
            let xc = points[xi].coord();
            if !xc.timelike_to(ext) || incidence.iter().any(|inc| inc.contains(&bi) && inc.contains(&xi)) {
                continue;
            }
            let c = ModelLine::through(format!("C{connectors}"), ext, &xc)?;
            connectors += 1;
            incidence.push(on_line(&c));
            lines.push(c);
        }
    }

    let ms = ModelSample {
        points,
        lines,
        incidence,
        designated: pairs,
        bound: cfg.bound.clone(),
    };
    let s = ms.to_structure();
    Ok((ms, s))
}
