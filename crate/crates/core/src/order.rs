//! Betweenness saturation and consistency.
//!
//! Saturation closes the asserted triples under three rules until nothing new
//! is derivable:
//!
//! * reversal: `[a b c] ⊢ [c b a]`
//! * transitivity: `[a b c], [b c d] ⊢ [a b d]` for pairwise distinct `a, b, c, d`
//! * `[a b c], [a c d] ⊢ [b c d]`
//!
//! The third rule follows from the first two but shortens derivations.
//! Inconsistency (a repeated event, or two different orderings of one
//! three-event set) is reported separately by [`check_consistency`].

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::{BetwTriple, EventId, Structure};

/// How a triple entered the relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    Asserted,
    O2,
    O4,
    AbcAcdBcd,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::Asserted => "asserted",
            Rule::O2 => "O2",
            Rule::O4 => "O4",
            Rule::AbcAcdBcd => "L-abc-acd-bcd",
        }
    }
}

type Idx = [usize; 3];

/// A betweenness relation over the events of one structure, with provenance.
///
/// Built either by [`saturate`] or, for independence experiments, by
/// [`SaturatedBetw::literal`] which keeps the asserted triples unclosed.
#[derive(Debug, Clone)]
pub struct SaturatedBetw {
    events: Vec<EventId>,
    index: HashMap<EventId, usize>,
    triples: HashMap<Idx, Rule>,
}

impl SaturatedBetw {
    fn empty(s: &Structure) -> Self {
        let events: Vec<EventId> = s.events().iter().cloned().collect();
        let index = events
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        SaturatedBetw {
            events,
            index,
            triples: HashMap::new(),
        }
    }

    fn idx(&self, t: &BetwTriple) -> Idx {
        [self.index[&t.0], self.index[&t.1], self.index[&t.2]]
    }

    /// The asserted relation, without any closure.
    pub fn literal(s: &Structure) -> Self {
        let mut sb = Self::empty(s);
        for t in s.betw() {
            let i = sb.idx(t);
            sb.triples.insert(i, Rule::Asserted);
        }
        sb
    }

    pub fn events(&self) -> &[EventId] {
        &self.events
    }

    pub fn index_of(&self, e: &EventId) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn event(&self, i: usize) -> &EventId {
        &self.events[i]
    }

    pub fn holds_idx(&self, a: usize, b: usize, c: usize) -> bool {
        self.triples.contains_key(&[a, b, c])
    }

    /// `[a b c]` is in the relation; unknown events yield `false`.
    pub fn holds(&self, a: &EventId, b: &EventId, c: &EventId) -> bool {
        match (self.index_of(a), self.index_of(b), self.index_of(c)) {
            (Some(a), Some(b), Some(c)) => self.holds_idx(a, b, c),
            _ => false,
        }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn provenance(&self, t: &BetwTriple) -> Option<Rule> {
        let i = [
            self.index_of(&t.0)?,
            self.index_of(&t.1)?,
            self.index_of(&t.2)?,
        ];
        self.triples.get(&i).copied()
    }

    pub fn triple_set(&self) -> BTreeSet<BetwTriple> {
        self.triples
            .keys()
            .map(|&[a, b, c]| {
                BetwTriple(
                    self.events[a].clone(),
                    self.events[b].clone(),
                    self.events[c].clone(),
                )
            })
            .collect()
    }

    pub fn provenance_map(&self) -> BTreeMap<BetwTriple, Rule> {
        self.triples
            .iter()
            .map(|(&[a, b, c], &r)| {
                (
                    BetwTriple(
                        self.events[a].clone(),
                        self.events[b].clone(),
                        self.events[c].clone(),
                    ),
                    r,
                )
            })
            .collect()
    }

    pub(crate) fn raw_triples(&self) -> impl Iterator<Item = Idx> + '_ {
        self.triples.keys().copied()
    }
}

#[derive(Default)]
struct Indexes {
    by_first2: HashMap<(usize, usize), Vec<usize>>,
    by_last2: HashMap<(usize, usize), Vec<usize>>,
    by_outer: HashMap<(usize, usize), Vec<usize>>,
}

impl Indexes {
    fn insert(&mut self, [a, b, c]: Idx) {
        self.by_first2.entry((a, b)).or_default().push(c);
        self.by_last2.entry((b, c)).or_default().push(a);
        self.by_outer.entry((a, c)).or_default().push(b);
    }
}

fn distinct4(a: usize, b: usize, c: usize, d: usize) -> bool {
    a != b && a != c && a != d && b != c && b != d && c != d
}

/// Least fixpoint of the asserted triples under the three closure rules.
pub fn saturate(s: &Structure) -> SaturatedBetw {
    let mut sb = SaturatedBetw::empty(s);
    let mut ix = Indexes::default();
    let mut work: VecDeque<Idx> = VecDeque::new();
    for t in s.betw() {
        let i = sb.idx(t);
        if sb.triples.insert(i, Rule::Asserted).is_none() {
            ix.insert(i);
            work.push_back(i);
        }
    }

    let mut derived: Vec<(Idx, Rule)> = Vec::new();
    while let Some([x, y, z]) = work.pop_front() {
        derived.clear();
        derived.push(([z, y, x], Rule::O2));

        // [x y z] as [a b c] with [b c d]
        if let Some(ds) = ix.by_first2.get(&(y, z)) {
            for &d in ds {
                if distinct4(x, y, z, d) {
                    derived.push(([x, y, d], Rule::O4));
                }
            }
        }
        // [x y z] as [b c d] with [a b c]
        if let Some(as_) = ix.by_last2.get(&(x, y)) {
            for &a in as_ {
                if distinct4(a, x, y, z) {
                    derived.push(([a, x, z], Rule::O4));
                }
            }
        }
        // [x y z] as [a b c] with [a c d]
        if let Some(ds) = ix.by_first2.get(&(x, z)) {
            for &d in ds {
                derived.push(([y, z, d], Rule::AbcAcdBcd));
            }
        }
        // [x y z] as [a c d] with [a b c]
        if let Some(bs) = ix.by_outer.get(&(x, y)) {
            for &b in bs {
                derived.push(([b, y, z], Rule::AbcAcdBcd));
            }
        }

        for &(t, rule) in &derived {
            if let std::collections::hash_map::Entry::Vacant(v) = sb.triples.entry(t) {
                v.insert(rule);
                ix.insert(t);
                work.push_back(t);
            }
        }
    }
    sb
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ConsistencyWitness {
    /// A triple with a repeated event (axiom O3).
    O3(BetwTriple),
    /// Two triples over the same three events with different middles (Theorem 1).
    Thm1(BetwTriple, BetwTriple),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyVerdict {
    pub consistent: bool,
    pub witnesses: Vec<ConsistencyWitness>,
}

pub fn check_consistency(sb: &SaturatedBetw) -> ConsistencyVerdict {
    let mut raw: Vec<Idx> = sb.raw_triples().collect();
    raw.sort_unstable();
    let to_triple = |[a, b, c]: Idx| {
        BetwTriple(sb.event(a).clone(), sb.event(b).clone(), sb.event(c).clone())
    };

    let mut witnesses = Vec::new();
    // Representative triple per (3-set, middle) class.
    let mut by_set: BTreeMap<[usize; 3], BTreeMap<usize, Idx>> = BTreeMap::new();
    for t in raw {
        let [a, b, c] = t;
        if a == b || b == c || a == c {
            witnesses.push(ConsistencyWitness::O3(to_triple(t)));
            continue;
        }
        let mut key = t;
        key.sort_unstable();
        by_set.entry(key).or_default().entry(b).or_insert(t);
    }
    for middles in by_set.values() {
        let reps: Vec<Idx> = middles.values().copied().collect();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                witnesses.push(ConsistencyWitness::Thm1(to_triple(reps[i]), to_triple(reps[j])));
            }
        }
    }
    ConsistencyVerdict {
        consistent: witnesses.is_empty(),
        witnesses,
    }
}

pub fn query_between(sb: &SaturatedBetw, a: &EventId, b: &EventId, c: &EventId) -> Result<bool> {
    let find = |e: &EventId| {
        sb.index_of(e)
            .ok_or_else(|| Error::UnknownEvent(e.to_string()))
    };
    Ok(sb.holds_idx(find(a)?, find(b)?, find(c)?))
}

/// Structure with its betweenness replaced by the saturated relation.
pub fn saturated_structure(s: &Structure) -> Structure {
    s.with_betw(saturate(s).triple_set())
        .expect("saturation only mentions declared events")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{ev, parse_structure};

    fn triples(list: &[(&str, &str, &str)]) -> BTreeSet<BetwTriple> {
        list.iter()
            .map(|(a, b, c)| BetwTriple(ev(a), ev(b), ev(c)))
            .collect()
    }

    /// Naive fixpoint: apply every rule to every pair of triples until stable.
    fn brute_fixpoint(start: &BTreeSet<BetwTriple>) -> BTreeSet<BetwTriple> {
        let mut cur = start.clone();
        loop {
            let mut next = cur.clone();
            for t in &cur {
                next.insert(t.reversed());
                for u in &cur {
                    let distinct = [&t.0, &t.1, &t.2, &u.2].iter().collect::<BTreeSet<_>>().len() == 4;
                    if t.1 == u.0 && t.2 == u.1 && distinct {
                        next.insert(BetwTriple(t.0.clone(), t.1.clone(), u.2.clone()));
                    }
                    if t.0 == u.0 && t.2 == u.1 {
                        next.insert(BetwTriple(t.1.clone(), t.2.clone(), u.2.clone()));
                    }
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    fn structure(events: &[&str], betw: &[(&str, &str, &str)]) -> Structure {
        let mut s = Structure::new();
        for e in events {
            s.add_event(ev(e));
        }
        for (a, b, c) in betw {
            s.add_betw(ev(a), ev(b), ev(c)).unwrap();
        }
        s
    }

    #[test]
    fn reversal_only() {
        let s = structure(&["a", "b", "c"], &[("a", "b", "c")]);
        let sb = saturate(&s);
        assert_eq!(sb.triple_set(), triples(&[("a", "b", "c"), ("c", "b", "a")]));
        assert_eq!(sb.provenance(&BetwTriple(ev("c"), ev("b"), ev("a"))), Some(Rule::O2));
    }

    #[test]
    fn four_events_matches_brute_force() {
        let s = structure(&["a", "b", "c", "d"], &[("a", "b", "c"), ("b", "c", "d")]);
        let expected = brute_fixpoint(s.betw());
        assert_eq!(expected.len(), 8);
        assert_eq!(
            expected,
            triples(&[
                ("a", "b", "c"),
                ("a", "b", "d"),
                ("a", "c", "d"),
                ("b", "c", "d"),
                ("c", "b", "a"),
                ("d", "b", "a"),
                ("d", "c", "a"),
                ("d", "c", "b"),
            ])
        );
        assert_eq!(saturate(&s).triple_set(), expected);
    }

    #[test]
    fn empty_fixpoint() {
        let s = structure(&["a"], &[]);
        assert!(saturate(&s).is_empty());
    }

    #[test]
    fn o4_needs_distinct_events() {
        // [a b c], [b c a]: not four distinct events, so no [a b a].
        let s = structure(&["a", "b", "c"], &[("a", "b", "c"), ("b", "c", "a")]);
        let sb = saturate(&s);
        assert!(!sb.holds(&ev("a"), &ev("b"), &ev("a")));
        assert_eq!(sb.triple_set(), brute_fixpoint(s.betw()));
    }

    #[test]
    fn consistency_verdicts() {
        let ok = SaturatedBetw::literal(&structure(&["a", "b", "c"], &[("a", "b", "c"), ("c", "b", "a")]));
        assert!(check_consistency(&ok).consistent);

        let two = SaturatedBetw::literal(&structure(&["a", "b", "c"], &[("a", "b", "c"), ("b", "a", "c")]));
        let v = check_consistency(&two);
        assert!(!v.consistent);
        assert!(matches!(v.witnesses[0], ConsistencyWitness::Thm1(..)));

        let rep = SaturatedBetw::literal(&structure(&["a", "b"], &[("a", "a", "b")]));
        let v = check_consistency(&rep);
        assert_eq!(v.witnesses, vec![ConsistencyWitness::O3(BetwTriple(ev("a"), ev("a"), ev("b")))]);
    }

    #[test]
    fn query_between_after_saturation() {
        let s = structure(&["a", "b", "c"], &[("a", "b", "c")]);
        let sb = saturate(&s);
        assert!(query_between(&sb, &ev("c"), &ev("b"), &ev("a")).unwrap());
        assert!(!query_between(&sb, &ev("a"), &ev("c"), &ev("b")).unwrap());
        assert!(query_between(&sb, &ev("a"), &ev("b"), &ev("zz")).is_err());
    }

    #[test]
    fn saturated_structure_roundtrips_through_text() {
        let s = parse_structure("event a\nevent b\nevent c\nbetw a b c").unwrap();
        let closed = saturated_structure(&s);
        assert_eq!(closed.betw().len(), 2);
    }
}
