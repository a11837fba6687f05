//! Intervals `|ab| = {x : [a x b]} ∪ {a, b}` on a path, the four-event
//! ordering predicate `betw4`, classification of interval pairs into
//! canonical cases up to relabeling, and derived operations that reason
//! one canonical case at a time.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::chain::{is_chain, Chain};
use crate::error::{Error, Result};
use crate::order::SaturatedBetw;
use crate::structure::{EventId, Path};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub path: String,
    pub a: EventId,
    pub b: EventId,
    pub events: BTreeSet<EventId>,
}

impl Interval {
    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}| = {{{}}}", self.a, self.b, self.events.iter().join(","))
    }
}

/// All four ordered triples `[a b c]`, `[a b d]`, `[a c d]`, `[b c d]` hold.
pub fn betw4(sb: &SaturatedBetw, a: &EventId, b: &EventId, c: &EventId, d: &EventId) -> bool {
    sb.holds(a, b, c) && sb.holds(a, b, d) && sb.holds(a, c, d) && sb.holds(b, c, d)
}

pub fn mk_interval(sb: &SaturatedBetw, path: &Path, a: &EventId, b: &EventId) -> Result<Interval> {
    for e in [a, b] {
        if !path.contains(e) {
            return Err(Error::NotOnPath {
                event: e.to_string(),
                path: path.name.clone(),
            });
        }
    }
    let mut events: BTreeSet<EventId> = path
        .members
        .iter()
        .filter(|x| sb.holds(a, x, b))
        .cloned()
        .collect();
    events.insert(a.clone());
    events.insert(b.clone());
    Ok(Interval {
        path: path.name.clone(),
        a: a.clone(),
        b: b.clone(),
        events,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum WlogTag {
    /// `betw4 a b c d`
    Disjoint,
    /// `betw4 a c b d`
    Overlapping,
    /// `betw4 a c d b`
    Nested,
    /// `a = c` and `[a d b]`: one shared endpoint, the second interval inside the first.
    SharedEndpointNested,
    /// `a = c` and `[b a d]`: the intervals meet only at the shared endpoint.
    SharedEndpointTouching,
    /// `{a, b} = {c, d}`
    Identical,
}

/// An element of the eight-element group generated by `a↔b`, `c↔d` and
/// `(a,b)↔(c,d)`. Applied in the order: swap intervals, then swap within
/// the (new) first and second interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Relabeling {
    pub swap_intervals: bool,
    pub swap_first: bool,
    pub swap_second: bool,
}

impl Relabeling {
    pub const IDENTITY: Relabeling = Relabeling {
        swap_intervals: false,
        swap_first: false,
        swap_second: false,
    };

    pub fn all() -> impl Iterator<Item = Relabeling> {
        (0..8u8).map(|m| Relabeling {
            swap_intervals: m & 4 != 0,
            swap_first: m & 1 != 0,
            swap_second: m & 2 != 0,
        })
    }

    pub fn apply<T: Clone>(&self, [a, b, c, d]: [T; 4]) -> [T; 4] {
        let (mut p, mut q, mut r, mut s) = if self.swap_intervals {
            (c, d, a, b)
        } else {
            (a, b, c, d)
        };
        if self.swap_first {
            std::mem::swap(&mut p, &mut q);
        }
        if self.swap_second {
            std::mem::swap(&mut r, &mut s);
        }
        [p, q, r, s]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WlogCase {
    pub tag: WlogTag,
    pub relabeling: Relabeling,
    /// The endpoints after relabeling, `(a, b, c, d)` in canonical position.
    pub canonical: [EventId; 4],
}

fn same_path(i: &Interval, j: &Interval) -> Result<()> {
    if i.path != j.path {
        return Err(Error::DifferentPaths(i.path.clone(), j.path.clone()));
    }
    Ok(())
}

fn matches_tag(sb: &SaturatedBetw, [p, q, r, s]: &[EventId; 4]) -> Option<WlogTag> {
    let distinct = [p, q, r, s].iter().collect::<BTreeSet<_>>().len();
    match distinct {
        4 => {
            if betw4(sb, p, q, r, s) {
                Some(WlogTag::Disjoint)
            } else if betw4(sb, p, r, q, s) {
                Some(WlogTag::Overlapping)
            } else if betw4(sb, p, r, s, q) {
                Some(WlogTag::Nested)
            } else {
                None
            }
        }
        3 if p == r => {
            if sb.holds(p, s, q) {
                Some(WlogTag::SharedEndpointNested)
            } else if sb.holds(q, p, s) {
                Some(WlogTag::SharedEndpointTouching)
            } else {
                None
            }
        }
        2 if p == r && q == s => Some(WlogTag::Identical),
        _ => None,
    }
}

/// Finds the canonical case of the endpoint configuration of `i` and `j`,
/// together with the relabeling that puts it in canonical position.
///
/// Both intervals must be proper (`a ≠ b`) and lie on the same path.
pub fn wlog_classify(sb: &SaturatedBetw, i: &Interval, j: &Interval) -> Result<WlogCase> {
    same_path(i, j)?;
    for iv in [i, j] {
        if iv.is_degenerate() {
            return Err(Error::DegenerateInterval(iv.a.to_string()));
        }
    }
    let labels = [i.a.clone(), i.b.clone(), j.a.clone(), j.b.clone()];
    for g in Relabeling::all() {
        let canonical = g.apply(labels.clone());
        if let Some(tag) = matches_tag(sb, &canonical) {
            return Ok(WlogCase {
                tag,
                relabeling: g,
                canonical,
            });
        }
    }
    Err(Error::Totality(
        format!("{},{}", i.a, i.b),
        j.a.to_string(),
        j.b.to_string(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    Interval(Interval),
}

impl Intersection {
    pub fn events(&self) -> BTreeSet<EventId> {
        match self {
            Intersection::Empty => BTreeSet::new(),
            Intersection::Interval(iv) => iv.events.clone(),
        }
    }
}

impl fmt::Display for Intersection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Intersection::Empty => f.write_str("Empty"),
            Intersection::Interval(iv) => iv.fmt(f),
        }
    }
}

/// Intersection of two intervals on `path`, with the endpoints of the result
/// read off the canonical case. Degenerate (singleton) intervals are allowed.
pub fn interval_intersect(
    sb: &SaturatedBetw,
    path: &Path,
    i: &Interval,
    j: &Interval,
) -> Result<Intersection> {
    same_path(i, j)?;
    if i.path != path.name {
        return Err(Error::DifferentPaths(i.path.clone(), path.name.clone()));
    }
    let singleton = |e: &EventId, other: &Interval| -> Result<Intersection> {
        if other.events.contains(e) {
            Ok(Intersection::Interval(mk_interval(sb, path, e, e)?))
        } else {
            Ok(Intersection::Empty)
        }
    };
    if i.is_degenerate() {
        return singleton(&i.a, j);
    }
    if j.is_degenerate() {
        return singleton(&j.a, i);
    }
    let case = wlog_classify(sb, i, j)?;
    let [a, b, c, d] = &case.canonical;
    let result = match case.tag {
        WlogTag::Disjoint => return Ok(Intersection::Empty),
        WlogTag::Overlapping => mk_interval(sb, path, c, b)?,
        WlogTag::Nested => mk_interval(sb, path, c, d)?,
        WlogTag::SharedEndpointNested => mk_interval(sb, path, a, d)?,
        WlogTag::SharedEndpointTouching => mk_interval(sb, path, a, a)?,
        WlogTag::Identical => mk_interval(sb, path, a, b)?,
    };
    Ok(Intersection::Interval(result))
}

/// `[y S z]`: every member of `s` lies between `y` and `z`.
pub fn betw_set(sb: &SaturatedBetw, y: &EventId, s: &BTreeSet<EventId>, z: &EventId) -> bool {
    s.iter().all(|x| sb.holds(y, x, z))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    pub ray_low: BTreeSet<EventId>,
    pub ray_high: BTreeSet<EventId>,
    /// `segments[i]` is the open interior between `seq[i]` and `seq[i + 1]`.
    pub segments: Vec<BTreeSet<EventId>>,
    pub chain_events: BTreeSet<EventId>,
}

/// Cuts `path` at the events of `ch` into two rays and the segment
/// interiors, and checks that the pieces partition the path.
pub fn decompose_path(sb: &SaturatedBetw, path: &Path, ch: &Chain) -> Result<PathDecomposition> {
    if ch.path != path.name {
        return Err(Error::DifferentPaths(ch.path.clone(), path.name.clone()));
    }
    for e in &ch.seq {
        if !path.contains(e) {
            return Err(Error::NotOnPath {
                event: e.to_string(),
                path: path.name.clone(),
            });
        }
    }
    if !is_chain(sb, ch) {
        return Err(Error::InvalidChain(format!("{ch} is not a chain")));
    }
    let seq = &ch.seq;
    let n = seq.len();
    let pick = |f: &dyn Fn(&EventId) -> bool| -> BTreeSet<EventId> {
        path.members.iter().filter(|x| f(x)).cloned().collect()
    };
    let ray_low = pick(&|x| sb.holds(x, &seq[0], &seq[1]));
    let ray_high = pick(&|x| sb.holds(&seq[n - 2], &seq[n - 1], x));
    let segments: Vec<BTreeSet<EventId>> = seq
        .windows(2)
        .map(|w| pick(&|x| sb.holds(&w[0], x, &w[1])))
        .collect();
    let chain_events = ch.events();

    for x in &path.members {
        let hits = usize::from(ray_low.contains(x))
            + usize::from(ray_high.contains(x))
            + segments.iter().filter(|s| s.contains(x)).count()
            + usize::from(chain_events.contains(x));
        match hits {
            1 => {}
            0 => {
                return Err(Error::Totality(
                    x.to_string(),
                    seq[0].to_string(),
                    seq[n - 1].to_string(),
                ))
            }
            _ => return Err(Error::Inconsistent(format!("{x} falls in more than one piece"))),
        }
    }
    Ok(PathDecomposition {
        ray_low,
        ray_high,
        segments,
        chain_events,
    })
}
