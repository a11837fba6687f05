#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use proptest::prelude::*;
use schutz_core::structure::{ev, BetwTriple, EventId, Structure};

/// Direct, unindexed reading of the axioms over string names.
pub struct Brute {
    pub events: Vec<String>,
    pub paths: BTreeMap<String, BTreeSet<String>>,
    pub betw: BTreeSet<(String, String, String)>,
}

impl Brute {
    pub fn new(s: &Structure, rel: &BTreeSet<BetwTriple>) -> Self {
        Brute {
            events: s.events().iter().map(|e| e.to_string()).collect(),
            paths: s
                .paths()
                .map(|p| (p.name.clone(), p.members.iter().map(|e| e.to_string()).collect()))
                .collect(),
            betw: rel.iter().map(|t| (t.0.to_string(), t.1.to_string(), t.2.to_string())).collect(),
        }
    }

    pub fn b(&self, a: &str, b: &str, c: &str) -> bool {
        self.betw.contains(&(a.to_string(), b.to_string(), c.to_string()))
    }

    fn on(&self, p: &str, e: &str) -> bool {
        self.paths.get(p).is_some_and(|m| m.contains(e))
    }

    fn joined(&self, a: &str, b: &str) -> bool {
        self.paths.values().any(|m| m.contains(a) && m.contains(b))
    }

    pub fn unreachable(&self, q: &str, b: &str) -> BTreeSet<String> {
        self.paths[q].iter().filter(|x| !self.joined(b, x)).cloned().collect()
    }

    fn is_chain(&self, seq: &[&String]) -> bool {
        seq.len() >= 2
            && seq.iter().collect::<BTreeSet<_>>().len() == seq.len()
            && seq
                .iter()
                .tuple_combinations()
                .all(|(x, y, z)| self.b(x, y, z))
    }

    /// True when `w` is a genuine counterexample to `ax`.
    pub fn replay(&self, ax: &str, w: &[String]) -> bool {
        let s = |i: usize| w[i].as_str();
        match (ax, w.len()) {
            ("O1", 3) => self.b(s(0), s(1), s(2)) && !self.paths.values().any(|m| w.iter().all(|e| m.contains(e))),
            ("O2", 3) => self.b(s(0), s(1), s(2)) && !self.b(s(2), s(1), s(0)),
            ("O3", 3) => self.b(s(0), s(1), s(2)) && (s(0) == s(1) || s(1) == s(2) || s(0) == s(2)),
            ("O4", 4) => {
                w.iter().collect::<BTreeSet<_>>().len() == 4
                    && self.b(s(0), s(1), s(2))
                    && self.b(s(1), s(2), s(3))
                    && !self.b(s(0), s(1), s(3))
            }
            ("O5", 3) => {
                w.iter().collect::<BTreeSet<_>>().len() == 3
                    && self.paths.values().any(|m| w.iter().all(|e| m.contains(e)))
                    && w.iter().permutations(3).all(|p| !self.b(p[0], p[1], p[2]))
            }
            ("O6", 9) => {
                let (q, r, sp, a, b, c, d, e, t) = (s(0), s(1), s(2), s(3), s(4), s(5), s(6), s(7), s(8));
                q != r
                    && r != sp
                    && q != sp
                    && self.on(q, a)
                    && self.on(r, a)
                    && self.on(q, b)
                    && self.on(sp, b)
                    && self.on(r, c)
                    && self.on(sp, c)
                    && self.on(sp, d)
                    && self.b(b, c, d)
                    && self.on(r, e)
                    && self.b(c, e, a)
                    && self.on(t, d)
                    && self.on(t, e)
                    && !self.paths[t]
                        .iter()
                        .any(|f| self.on(q, f) && self.is_chain(&[&a.to_string(), f, &b.to_string()]))
            }
            ("I1", 0) => self.events.is_empty(),
            ("I2", 2) => {
                s(0) != s(1)
                    && !self.paths.values().any(|r| {
                        r.contains(s(0)) && self.paths.values().any(|sp| sp.contains(s(1)) && !r.is_disjoint(sp))
                    })
            }
            ("I3", 4) => s(0) != s(1) && s(2) != s(3) && [s(0), s(1)].iter().all(|p| self.on(p, s(2)) && self.on(p, s(3))),
            ("I5", 2) => !self.on(s(0), s(1)) && self.unreachable(s(0), s(1)).len() < 2,
            ("I6", 4) => {
                let u = self.unreachable(s(0), s(1));
                if self.on(s(0), s(1)) || s(2) == s(3) || !u.contains(s(2)) || !u.contains(s(3)) {
                    return false;
                }
                let middle: Vec<&String> = u.iter().filter(|x| *x != s(2) && *x != s(3)).collect();
                for k in 0..=middle.len() {
                    for mid in middle.iter().permutations(k) {
                        let mut seq = vec![&w[2]];
                        seq.extend(mid.into_iter().copied());
                        seq.push(&w[3]);
                        let gaps_ok = seq.windows(2).all(|g| {
                            self.paths[s(0)].iter().all(|y| !self.b(g[0], y, g[1]) || u.contains(y))
                        });
                        if self.is_chain(&seq) && gaps_ok {
                            return false;
                        }
                    }
                }
                true
            }
            ("I7", 4) => {
                let u = self.unreachable(s(0), s(1));
                let q = &self.paths[s(0)];
                !self.on(s(0), s(1))
                    && q.contains(s(2))
                    && !u.contains(s(2))
                    && u.contains(s(3))
                    && !q
                        .iter()
                        .filter(|n| !u.contains(*n))
                        .any(|n| self.is_chain(&[&w[2], &w[3], n]))
            }
            _ => false,
        }
    }

    /// Whether any counterexample of `ax` exists, by enumerating every tuple
    /// of the witness shape. Not used for O6.
    pub fn violated(&self, ax: &str) -> bool {
        let ev = &self.events;
        let pn: Vec<String> = self.paths.keys().cloned().collect();
        let tuples = |k: usize| -> Vec<Vec<String>> {
            (0..k).map(|_| ev.iter().cloned()).multi_cartesian_product().collect()
        };
        match ax {
            "O1" | "O2" | "O3" | "O5" => tuples(3).iter().any(|w| self.replay(ax, w)),
            "O4" => tuples(4).iter().any(|w| self.replay(ax, w)),
            "I1" => self.replay(ax, &[]),
            "I2" => tuples(2).iter().any(|w| self.replay(ax, w)),
            "I3" => pn.iter().any(|q| {
                pn.iter()
                    .any(|r| tuples(2).iter().any(|xy| self.replay(ax, &[q.clone(), r.clone(), xy[0].clone(), xy[1].clone()])))
            }),
            "I5" => pn.iter().any(|q| ev.iter().any(|b| self.replay(ax, &[q.clone(), b.clone()]))),
            "I6" | "I7" => pn.iter().any(|q| {
                ev.iter().any(|b| {
                    tuples(2)
                        .iter()
                        .any(|xy| self.replay(ax, &[q.clone(), b.clone(), xy[0].clone(), xy[1].clone()]))
                })
            }),
            other => panic!("no exhaustive search for {other}"),
        }
    }
}

pub fn name(i: usize) -> String {
    format!("e{i}")
}

/// The structure of a single path `0, 1, …, n-1` whose betweenness is the
/// numeric order (both orientations).
pub fn numbered_line(n: usize) -> Structure {
    let mut s = Structure::new();
    for i in 0..n {
        s.add_event(ev(&i.to_string()));
    }
    s.add_path("L", (0..n).map(|i| ev(&i.to_string()))).unwrap();
    for (i, j, k) in (0..n).tuple_combinations() {
        let (a, b, c) = (ev(&i.to_string()), ev(&j.to_string()), ev(&k.to_string()));
        s.add_betw(a.clone(), b.clone(), c.clone()).unwrap();
        s.add_betw(c, b, a).unwrap();
    }
    s
}

pub fn ids(xs: &[usize]) -> Vec<EventId> {
    xs.iter().map(|i| ev(&i.to_string())).collect()
}

/// Small arbitrary structures: up to `max_events` events, a few paths given
/// by membership masks and a few raw triples (repeats allowed).
pub fn arb_structure(max_events: usize) -> impl Strategy<Value = Structure> {
    (1..=max_events)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(0u32..(1 << n), 0..4),
                prop::collection::vec((0..n, 0..n, 0..n), 0..10),
            )
        })
        .prop_map(|(n, masks, triples)| {
            let mut s = Structure::new();
            for i in 0..n {
                s.add_event(ev(&name(i)));
            }
            for (pi, m) in masks.iter().enumerate() {
                let members: Vec<EventId> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| ev(&name(i))).collect();
                let _ = s.add_path(&format!("P{pi}"), members);
            }
            for (a, b, c) in triples {
                s.add_betw(ev(&name(a)), ev(&name(b)), ev(&name(c))).unwrap();
            }
            s
        })
}
