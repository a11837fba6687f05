//! Exact-rational 1+1 Minkowski model.
//!
//! Points are `(t, x)` pairs, paths are timelike lines (speed strictly below
//! one) and two events are joinable by a path exactly when their separation
//! is strictly timelike. Every incidence and order decision is a sign test on
//! rationals.

mod generate;
mod theorems;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::checker::DesignatedPair;
use crate::error::{Error, Result};
use crate::structure::{EventId, Structure};

pub use generate::{generate_sample, GenConfig};
pub use theorems::{check_theorem, Theorem, TheoremVerdict, RETRY_BUDGET};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coord {
    pub t: Rational,
    pub x: Rational,
}

impl Coord {
    pub fn new(t: Rational, x: Rational) -> Self {
        Coord { t, x }
    }

    pub fn sub(&self, o: &Coord) -> Coord {
        Coord::new(&self.t - &o.t, &self.x - &o.x)
    }

    pub fn add(&self, o: &Coord) -> Coord {
        Coord::new(&self.t + &o.t, &self.x + &o.x)
    }

    pub fn scale(&self, k: &Rational) -> Coord {
        Coord::new(&self.t * k, &self.x * k)
    }

    /// `(Δt)² − (Δx)²` between `self` and `o`.
    pub fn interval_sq(&self, o: &Coord) -> Rational {
        let d = self.sub(o);
        &d.t * &d.t - &d.x * &d.x
    }

    pub fn timelike_to(&self, o: &Coord) -> bool {
        self.interval_sq(o).is_positive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelPoint {
    pub id: EventId,
    pub t: Rational,
    pub x: Rational,
}

impl ModelPoint {
    pub fn coord(&self) -> Coord {
        Coord::new(self.t.clone(), self.x.clone())
    }
}

pub fn interval_sq(p: &ModelPoint, q: &ModelPoint) -> Rational {
    p.coord().interval_sq(&q.coord())
}

/// The line `base + λ·dir` with `dir.t > 0` and `dir.t² > dir.x²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelLine {
    pub name: String,
    pub base: Coord,
    pub dir: Coord,
}

impl ModelLine {
    /// The line through `p` and `q`, oriented towards increasing `t`.
    pub fn through(name: impl Into<String>, p: &Coord, q: &Coord) -> Result<Self> {
        let name = name.into();
        if !p.timelike_to(q) {
            return Err(Error::NotCollinear(format!("{name}: points are not timelike separated")));
        }
        let (lo, hi) = if p.t < q.t { (p, q) } else { (q, p) };
        Ok(ModelLine {
            name,
            base: lo.clone(),
            dir: hi.sub(lo),
        })
    }

    pub fn contains(&self, c: &Coord) -> bool {
        let d = c.sub(&self.base);
        (&d.t * &self.dir.x - &d.x * &self.dir.t).is_zero()
    }

    pub fn param(&self, c: &Coord) -> Rational {
        (&c.t - &self.base.t) / &self.dir.t
    }

    pub fn at(&self, lambda: &Rational) -> Coord {
        self.base.add(&self.dir.scale(lambda))
    }

    /// `f(λ) = interval_sq(at(λ), b) = αλ² + βλ + γ`.
    pub fn quadratic(&self, b: &Coord) -> (Rational, Rational, Rational) {
        let d = self.base.sub(b);
        let alpha = &self.dir.t * &self.dir.t - &self.dir.x * &self.dir.x;
        let beta = int(2) * (&self.dir.t * &d.t - &self.dir.x * &d.x);
        (alpha, beta, self.base.interval_sq(b))
    }

    /// Parameter of the minimum of `f`, the centre of the unreachable interval.
    pub fn vertex(&self, b: &Coord) -> Rational {
        let (alpha, beta, _) = self.quadratic(b);
        -beta / (int(2) * alpha)
    }

    pub fn intersect(&self, o: &ModelLine) -> Option<Coord> {
        let det = &o.dir.t * &self.dir.x - &self.dir.t * &o.dir.x;
        if det.is_zero() {
            return None;
        }
        let w = o.base.sub(&self.base);
        let lambda = (&o.dir.t * &w.x - &w.t * &o.dir.x) / det;
        Some(self.at(&lambda))
    }
}

/// Strict betweenness in coordinates: distinct collinear events on a
/// timelike line with `b` strictly between `a` and `c` in time.
pub fn coord_betw(a: &Coord, b: &Coord, c: &Coord) -> bool {
    if !a.timelike_to(c) {
        return false;
    }
    let d1 = b.sub(a);
    let d2 = c.sub(a);
    if !(&d1.t * &d2.x - &d1.x * &d2.t).is_zero() {
        return false;
    }
    (a.t < b.t && b.t < c.t) || (c.t < b.t && b.t < a.t)
}

/// Rational bounds `lo ≤ √(p) ≤ hi` for a positive rational `p`, with
/// `hi − lo = 1/(den·scale)`.
pub fn sqrt_bounds(p: &Rational, scale: u32) -> (Rational, Rational) {
    let m = BigInt::from(scale);
    let num = p.numer() * p.denom() * &m * &m;
    let s = num.sqrt();
    let den = p.denom() * &m;
    (
        Rational::new(s.clone(), den.clone()),
        Rational::new(s + BigInt::one(), den),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSample {
    pub points: Vec<ModelPoint>,
    pub lines: Vec<ModelLine>,
    /// Indices into `points` for each line, sorted by `t`.
    pub incidence: Vec<Vec<usize>>,
    pub designated: Vec<DesignatedPair>,
    pub bound: Rational,
}

impl ModelSample {
    pub fn point(&self, id: &EventId) -> Result<&ModelPoint> {
        self.points
            .iter()
            .find(|p| &p.id == id)
            .ok_or_else(|| Error::UnknownEvent(id.to_string()))
    }

    pub fn line_index(&self, name: &str) -> Result<usize> {
        self.lines
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| Error::UnknownPath(name.to_string()))
    }

    pub fn points_on(&self, line: usize) -> impl Iterator<Item = &ModelPoint> {
        self.incidence[line].iter().map(move |&i| &self.points[i])
    }

    fn find_coord(&self, c: &Coord) -> Option<usize> {
        self.points.iter().position(|p| p.t == c.t && p.x == c.x)
    }

    /// Inserts a point (or returns the existing one at the same coordinates)
    /// and records it on every line through it.
    fn insert_point(&mut self, c: Coord) -> usize {
        if let Some(i) = self.find_coord(&c) {
            return i;
        }
        let mut n = self.points.len();
        let id = loop {
            let id = EventId::new(format!("e{n}")).expect("valid token");
            if self.point(&id).is_err() {
                break id;
            }
            n += 1;
        };
        let idx = self.points.len();
        self.points.push(ModelPoint { id, t: c.t.clone(), x: c.x.clone() });
        for (li, line) in self.lines.iter().enumerate() {
            if line.contains(&c) {
                let inc = &mut self.incidence[li];
                let pos = inc.partition_point(|&j| self.points[j].t < c.t);
                inc.insert(pos, idx);
            }
        }
        idx
    }

    /// Exports the sample: one path per line with at least two points and
    /// every coordinate-betweenness triple along each line.
    pub fn to_structure(&self) -> Structure {
        let mut s = Structure::new();
        for p in &self.points {
            s.add_event(p.id.clone());
        }
        for (li, line) in self.lines.iter().enumerate() {
            let ids: Vec<EventId> = self.points_on(li).map(|p| p.id.clone()).collect();
            if ids.len() < 2 {
                continue;
            }
            s.add_path(&line.name, ids.iter().cloned()).expect("distinct declared members");
            for i in 0..ids.len() {
                for j in i + 1..ids.len() {
                    for k in j + 1..ids.len() {
                        s.add_betw(ids[i].clone(), ids[j].clone(), ids[k].clone()).expect("declared");
                        s.add_betw(ids[k].clone(), ids[j].clone(), ids[i].clone()).expect("declared");
                    }
                }
            }
        }
        s
    }

    /// Rebuilds a sample from an exported structure, its coordinates and its
    /// designated pairs. Every path must be a set of collinear, pairwise
    /// timelike-separated points.
    pub fn from_structure(
        s: &Structure,
        coords: &BTreeMap<EventId, Coord>,
        designated: Vec<DesignatedPair>,
    ) -> Result<ModelSample> {
        let mut points = Vec::new();
        let mut index = BTreeMap::new();
        for e in s.events() {
            let c = coords
                .get(e)
                .ok_or_else(|| Error::MalformedCoordinate(format!("no coordinate for event {e}")))?;
            index.insert(e.clone(), points.len());
            points.push(ModelPoint { id: e.clone(), t: c.t.clone(), x: c.x.clone() });
        }
        let mut bound = Rational::zero();
        for p in &points {
            bound = bound.max(p.t.abs()).max(p.x.abs());
        }
        let mut lines = Vec::new();
        let mut incidence = Vec::new();
        for path in s.paths() {
            let mut idx: Vec<usize> = path.members.iter().map(|m| index[m]).collect();
            idx.sort_by(|&a, &b| points[a].t.cmp(&points[b].t));
            let first = points[idx[0]].coord();
            let last = points[*idx.last().expect("non-empty")].coord();
            let line = ModelLine::through(path.name.clone(), &first, &last)?;
            if let Some(&bad) = idx.iter().find(|&&i| !line.contains(&points[i].coord())) {
                return Err(Error::NotCollinear(format!("{} on path {}", points[bad].id, path.name)));
            }
            lines.push(line);
            incidence.push(idx);
        }
        Ok(ModelSample {
            points,
            lines,
            incidence,
            designated,
            bound,
        })
    }
}

/// Sampled events on `line` whose separation from `b` is not timelike.
pub fn oracle_unreachable(ms: &ModelSample, line: &str, b: &ModelPoint) -> Result<BTreeSet<EventId>> {
    let li = ms.line_index(line)?;
    let bc = b.coord();
    if ms.lines[li].contains(&bc) {
        return Err(Error::OnPath {
            event: b.id.to_string(),
            path: line.to_string(),
        });
    }
    Ok(ms
        .points_on(li)
        .filter(|p| !p.coord().timelike_to(&bc))
        .map(|p| p.id.clone())
        .collect())
}

/// Adds `c = b + (b − a)` on the line through `a` and `b`, reusing an existing
/// event at those coordinates.
pub fn prolong(ms: &mut ModelSample, a: &EventId, b: &EventId) -> Result<EventId> {
    let ia = ms.points.iter().position(|p| &p.id == a).ok_or_else(|| Error::UnknownEvent(a.to_string()))?;
    let ib = ms.points.iter().position(|p| &p.id == b).ok_or_else(|| Error::UnknownEvent(b.to_string()))?;
    if ia == ib || !ms.incidence.iter().any(|inc| inc.contains(&ia) && inc.contains(&ib)) {
        return Err(Error::NotCollinear(format!("{a} and {b} share no line")));
    }
    let pa = ms.points[ia].coord();
    let pb = ms.points[ib].coord();
    let c = pb.add(&pb.sub(&pa));
    let ic = ms.insert_point(c);
    Ok(ms.points[ic].id.clone())
}

fn parse_rational(tok: &str) -> Result<Rational> {
    tok.parse::<Rational>()
        .map_err(|_| Error::MalformedCoordinate(format!("bad rational {tok:?}")))
}

/// Reads a coordinate sidecar: lines `coord <event> <t> <x>`.
pub fn parse_coords(text: &str) -> Result<BTreeMap<EventId, Coord>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let wrap = |e: Error| Error::Parse { line: i + 1, message: e.to_string() };
        if toks.len() != 4 || toks[0] != "coord" {
            return Err(Error::Parse {
                line: i + 1,
                message: "expected `coord <event> <t> <x>`".into(),
            });
        }
        let id = EventId::new(toks[1]).map_err(wrap)?;
        let c = Coord::new(parse_rational(toks[2]).map_err(wrap)?, parse_rational(toks[3]).map_err(wrap)?);
        out.insert(id, c);
    }
    Ok(out)
}

pub fn serialize_coords(ms: &ModelSample) -> String {
    let mut pts: Vec<&ModelPoint> = ms.points.iter().collect();
    pts.sort_by(|a, b| a.id.cmp(&b.id));
    pts.iter().map(|p| format!("coord {} {} {}\n", p.id, p.t, p.x)).collect()
}
