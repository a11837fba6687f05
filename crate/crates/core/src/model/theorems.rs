//! Model-level checks of order theorems on samples and random configurations.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{coord_betw, int, oracle_unreachable, prolong, rat, Coord, ModelLine, ModelPoint, ModelSample, Rational};
use crate::checker::unreachable_from;
use crate::error::{Error, Result};
use crate::structure::EventId;

/// Resampling budget for one random trial before it is counted as a skip.
pub const RETRY_BUDGET: usize = 1000;

/// Number of `prolong` steps tried when the sample lacks a needed event.
const PROLONG_STEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Theorem {
    T4,
    T8,
    T3_7,
    T13,
    T14i,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [Theorem::T4, Theorem::T8, Theorem::T3_7, Theorem::T13, Theorem::T14i];

    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::T4 => "T4",
            Theorem::T8 => "T8",
            Theorem::T3_7 => "T3_7",
            Theorem::T13 => "T13",
            Theorem::T14i => "T14i",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::MalformedToken(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    pub thm: Theorem,
    pub checked: usize,
    pub violations: Vec<Vec<String>>,
    pub skips: usize,
}

impl TheoremVerdict {
    pub fn label(&self) -> &'static str {
        if !self.violations.is_empty() {
            "FAIL"
        } else if self.checked == 0 {
            "INCONCLUSIVE"
        } else {
            "PASS"
        }
    }
}

/// Runs one theorem check. `T8` and `T3_7` draw `trials` random
/// configurations; the other checks range over the designated pairs of the
/// sample. The sample itself is left untouched; prolongations happen on a
/// private copy.
pub fn check_theorem(ms: &ModelSample, thm: Theorem, trials: usize, seed: u64) -> Result<TheoremVerdict> {
    if trials == 0 {
        return Err(Error::DegenerateConfig("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (thm as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut v = TheoremVerdict {
        thm,
        checked: 0,
        violations: Vec::new(),
        skips: 0,
    };
    let mut work = ms.clone();
    match thm {
        Theorem::T4 => t4(&mut work, &mut v)?,
        Theorem::T8 => random_trials(&mut v, trials, |v| t8_trial(&mut rng, &ms.bound, v)),
        Theorem::T3_7 => random_trials(&mut v, trials, |v| t3_7_trial(&mut rng, &ms.bound, v)),
        Theorem::T13 => t13(&work, &mut v)?,
        Theorem::T14i => t14i(&mut work, &mut v)?,
    }
    Ok(v)
}

fn designated(ms: &ModelSample) -> Result<Vec<(usize, ModelPoint)>> {
    ms.designated
        .iter()
        .map(|p| {
            let li = ms.line_index(&p.path).map_err(|e| Error::MalformedPair(e.to_string()))?;
            let b = ms.point(&p.event).map_err(|e| Error::MalformedPair(e.to_string()))?.clone();
            if ms.lines[li].contains(&b.coord()) {
                return Err(Error::MalformedPair(format!("event {} lies on path {}", p.event, p.path)));
            }
            Ok((li, b))
        })
        .collect()
}

fn ids_on(ms: &ModelSample, li: usize) -> Vec<ModelPoint> {
    ms.points_on(li).cloned().collect()
}

fn t4(ms: &mut ModelSample, v: &mut TheoremVerdict) -> Result<()> {
    for (li, b) in designated(ms)? {
        let bc = b.coord();
        let on_q = ids_on(ms, li);
        let (reach, unreach): (Vec<&ModelPoint>, Vec<&ModelPoint>) =
            on_q.iter().partition(|p| p.coord().timelike_to(&bc));
        for a in &reach {
            for x in &unreach {
                v.checked += 1;
                let (ac, xc) = (a.coord(), x.coord());
                let sampled = ms
                    .points_on(li)
                    .any(|c| c.coord().timelike_to(&bc) && coord_betw(&ac, &xc, &c.coord()));
                if sampled {
                    continue;
                }
                let mut prev = a.id.clone();
                let mut cur = x.id.clone();
                let mut found = false;
                for _ in 0..PROLONG_STEPS {
                    let next = prolong(ms, &prev, &cur)?;
                    if ms.point(&next)?.coord().timelike_to(&bc) {
                        found = true;
                        break;
                    }
                    prev = cur;
                    cur = next;
                }
                if !found {
                    v.violations.push(vec![
                        ms.lines[li].name.clone(),
                        b.id.to_string(),
                        a.id.to_string(),
                        x.id.to_string(),
                    ]);
                }
            }
        }
    }
    Ok(())
}

fn random_trials(v: &mut TheoremVerdict, trials: usize, mut trial: impl FnMut(&mut TheoremVerdict) -> bool) {
    for _ in 0..trials {
        if (0..RETRY_BUDGET).any(|_| trial(v)) {
            v.checked += 1;
        } else {
            v.skips += 1;
        }
    }
}

fn random_coord(rng: &mut ChaCha8Rng, bound: &Rational) -> Coord {
    let b = if bound.is_positive() { bound.clone() } else { int(10) };
    Coord::new(&b * rat(rng.gen_range(-64..=64), 64), &b * rat(rng.gen_range(-64..=64), 64))
}

fn random_line(rng: &mut ChaCha8Rng, bound: &Rational, name: &str) -> ModelLine {
    ModelLine {
        name: name.to_string(),
        base: random_coord(rng, bound),
        dir: Coord::new(int(1), rat(rng.gen_range(-31..=31), 32)),
    }
}

fn show(c: &Coord) -> String {
    format!("({},{})", c.t, c.x)
}

/// A transversal timelike line never meets all three sides of a triangle of
/// timelike lines strictly inside. Returns false on a degenerate draw.
fn t8_trial(rng: &mut ChaCha8Rng, bound: &Rational, v: &mut TheoremVerdict) -> bool {
    let sides = [
        random_line(rng, bound, "A"),
        random_line(rng, bound, "B"),
        random_line(rng, bound, "C"),
    ];
    let t = random_line(rng, bound, "T");
    let vertex = |i: usize, j: usize| sides[i].intersect(&sides[j]);
    let (Some(ab), Some(bc), Some(ca)) = (vertex(0, 1), vertex(1, 2), vertex(2, 0)) else {
        return false;
    };
    if ab == bc || bc == ca || ca == ab {
        return false;
    }
    if [&ab, &bc, &ca].iter().any(|c| t.contains(c)) {
        return false;
    }
    let ends = [(&ca, &ab), (&ab, &bc), (&bc, &ca)];
    let hits = sides
        .iter()
        .zip(ends)
        .filter(|(side, (p, q))| t.intersect(side).is_some_and(|f| coord_betw(p, &f, q)))
        .count();
    if hits == 3 {
        v.violations.push(vec![show(&ab), show(&bc), show(&ca), show(&t.base), show(&t.dir)]);
    }
    true
}

/// Kinematic triangle `a, b, c` with `[a e c]` and `[b c d]`: the path
/// through `d` and `e` meets the path through `a` and `b` at `f` with
/// `[a f b]` and `[d e f]`.
fn t3_7_trial(rng: &mut ChaCha8Rng, bound: &Rational, v: &mut TheoremVerdict) -> bool {
    let a = random_coord(rng, bound);
    let b = random_coord(rng, bound);
    let c = random_coord(rng, bound);
    if !(a.timelike_to(&b) && b.timelike_to(&c) && a.timelike_to(&c)) {
        return false;
    }
    let ab = ModelLine::through("ab", &a, &b).expect("timelike");
    if ab.contains(&c) {
        return false;
    }
    let e = a.add(&c.sub(&a).scale(&rat(rng.gen_range(1..=15), 16)));
    let d = c.add(&c.sub(&b).scale(&rat(rng.gen_range(1..=32), 16)));
    if !d.timelike_to(&e) {
        return false;
    }
    let de = ModelLine::through("de", &d, &e).expect("timelike");
    let Some(f) = de.intersect(&ab) else {
        return false;
    };
    if !(coord_betw(&a, &f, &b) && coord_betw(&d, &e, &f)) {
        v.violations.push([&a, &b, &c, &d, &e, &f].iter().map(|p| show(p)).collect());
    }
    true
}

/// The unreachable set computed on the exported structure is order-convex
/// along the path.
fn t13(ms: &ModelSample, v: &mut TheoremVerdict) -> Result<()> {
    let s = ms.to_structure();
    for (li, b) in designated(ms)? {
        v.checked += 1;
        let name = &ms.lines[li].name;
        let u = unreachable_from(&s, s.path(name)?, &b.id)?.members;
        let on_q = ids_on(ms, li);
        let inside: Vec<usize> = (0..on_q.len()).filter(|&i| u.contains(&on_q[i].id)).collect();
        let (Some(&lo), Some(&hi)) = (inside.first(), inside.last()) else {
            continue;
        };
        if let Some(y) = on_q[lo..=hi].iter().find(|p| !u.contains(&p.id)) {
            v.violations.push(vec![
                name.clone(),
                b.id.to_string(),
                on_q[lo].id.to_string(),
                y.id.to_string(),
                on_q[hi].id.to_string(),
            ]);
        }
    }
    Ok(())
}

/// Walks `prolong` outwards from one end of `li` until `ok` holds.
fn extend_until(
    ms: &mut ModelSample,
    li: usize,
    upward: bool,
    ok: impl Fn(&ModelPoint) -> bool,
) -> Result<Option<EventId>> {
    let on_q = ids_on(ms, li);
    let n = on_q.len();
    let (mut inner, mut outer) = if upward {
        (on_q[n - 2].id.clone(), on_q[n - 1].id.clone())
    } else {
        (on_q[1].id.clone(), on_q[0].id.clone())
    };
    for _ in 0..PROLONG_STEPS {
        if ok(ms.point(&outer)?) {
            return Ok(Some(outer));
        }
        let next = prolong(ms, &inner, &outer)?;
        inner = outer;
        outer = next;
    }
    Ok(None)
}

/// For two external events `a`, `b` the path has events `y`, `z` bounding
/// both unreachable sets.
fn t14i(ms: &mut ModelSample, v: &mut TheoremVerdict) -> Result<()> {
    let pairs = designated(ms)?;
    let mut lines: Vec<usize> = pairs.iter().map(|(li, _)| *li).collect();
    lines.sort_unstable();
    lines.dedup();
    let mut externals: Vec<ModelPoint> = pairs.iter().map(|(_, b)| b.clone()).collect();
    externals.sort_by(|a, b| a.id.cmp(&b.id));
    externals.dedup_by(|a, b| a.id == b.id);

    for li in lines {
        let line = ms.lines[li].clone();
        let off: Vec<&ModelPoint> = externals.iter().filter(|e| !line.contains(&e.coord())).collect();
        for (i, a) in off.iter().enumerate() {
            for b in &off[i + 1..] {
                v.checked += 1;
                let (ac, bc) = (a.coord(), b.coord());
                let (va, vb) = (line.vertex(&ac), line.vertex(&bc));
                let below = |p: &ModelPoint| {
                    let l = line.param(&p.coord());
                    l < va && l < vb && p.coord().timelike_to(&ac) && p.coord().timelike_to(&bc)
                };
                let above = |p: &ModelPoint| {
                    let l = line.param(&p.coord());
                    l > va && l > vb && p.coord().timelike_to(&ac) && p.coord().timelike_to(&bc)
                };
                let y = extend_until(ms, li, false, below)?;
                let z = extend_until(ms, li, true, above)?;
                let witness = vec![line.name.clone(), a.id.to_string(), b.id.to_string()];
                let (Some(y), Some(z)) = (y, z) else {
                    v.violations.push(witness);
                    continue;
                };
                let yc = ms.point(&y)?.coord();
                let zc = ms.point(&z)?.coord();
                let mut unreachable = oracle_unreachable(ms, &line.name, a)?;
                unreachable.extend(oracle_unreachable(ms, &line.name, b)?);
                for u in &unreachable {
                    if !coord_betw(&yc, &ms.point(u)?.coord(), &zc) {
                        v.violations.push(witness);
                        break;
                    }
                }
            }
        }
    }
    Ok(())
}
