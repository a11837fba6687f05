//! Chains: finite sequences of events on one path whose indexing function is
//! kept explicitly, so that `seq[i]` is the event with index `i`.
//!
//! A sequence of two distinct events is a chain with no betweenness
//! obligation. Longer sequences must satisfy `[seq[i] seq[j] seq[k]]` for
//! every `i < j < k`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::order::SaturatedBetw;
use crate::structure::{EventId, Path};

/// Default cap on the size of a set whose orderings are enumerated.
pub const DEFAULT_ORDERING_BOUND: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub path: String,
    pub seq: Vec<EventId>,
}

impl Chain {
    /// Checks the structural invariants: at least two entries, no repeats,
    /// every entry on `path`.
    pub fn new(path: &Path, seq: Vec<EventId>) -> Result<Chain> {
        if seq.len() < 2 {
            return Err(Error::InvalidChain("a chain needs at least two events".into()));
        }
        let distinct: BTreeSet<&EventId> = seq.iter().collect();
        if distinct.len() != seq.len() {
            return Err(Error::InvalidChain("repeated event in chain".into()));
        }
        for e in &seq {
            if !path.contains(e) {
                return Err(Error::NotOnPath {
                    event: e.to_string(),
                    path: path.name.clone(),
                });
            }
        }
        Ok(Chain {
            path: path.name.clone(),
            seq,
        })
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn first(&self) -> &EventId {
        &self.seq[0]
    }

    pub fn last(&self) -> &EventId {
        &self.seq[self.seq.len() - 1]
    }

    pub fn events(&self) -> BTreeSet<EventId> {
        self.seq.iter().cloned().collect()
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.seq.iter().join(","))
    }
}

/// The chain condition on a bare sequence.
pub fn is_chain_seq(sb: &SaturatedBetw, seq: &[EventId]) -> bool {
    let n = seq.len();
    if n < 2 {
        return false;
    }
    if n == 2 {
        return seq[0] != seq[1];
    }
    let idx: Option<Vec<usize>> = seq.iter().map(|e| sb.index_of(e)).collect();
    let Some(idx) = idx else { return false };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if !sb.holds_idx(idx[i], idx[j], idx[k]) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_chain(sb: &SaturatedBetw, ch: &Chain) -> bool {
    is_chain_seq(sb, &ch.seq)
}

/// Reindexes with `n ↦ len - 1 - n`.
pub fn chain_reverse(ch: &Chain) -> Chain {
    let mut seq = ch.seq.clone();
    seq.reverse();
    Chain {
        path: ch.path.clone(),
        seq,
    }
}

fn require_betw(sb: &SaturatedBetw, a: &EventId, b: &EventId, c: &EventId) -> Result<()> {
    if sb.holds(a, b, c) {
        Ok(())
    } else {
        Err(Error::MissingBetweenness(a.to_string(), b.to_string(), c.to_string()))
    }
}

fn check_appendable(sb: &SaturatedBetw, ch: &Chain, b: &EventId) -> Result<()> {
    if ch.seq.contains(b) {
        return Err(Error::AlreadyInChain(b.to_string()));
    }
    if !is_chain(sb, ch) {
        return Err(Error::InvalidChain(format!("{ch} is not a chain")));
    }
    Ok(())
}

/// New chain `g` with `g(0) = b` and `g(j) = f(j - 1)` for `j ≥ 1`.
///
/// Requires `[b seq[0] seq[last]]`; the result is re-verified.
pub fn chain_append_left(ch: &Chain, b: &EventId, sb: &SaturatedBetw) -> Result<Chain> {
    check_appendable(sb, ch, b)?;
    require_betw(sb, b, ch.first(), ch.last())?;
    let mut seq = Vec::with_capacity(ch.len() + 1);
    seq.push(b.clone());
    seq.extend(ch.seq.iter().cloned());
    let out = Chain {
        path: ch.path.clone(),
        seq,
    };
    if !is_chain(sb, &out) {
        return Err(Error::InvalidChain(format!("{out} fails the chain condition")));
    }
    Ok(out)
}

/// Appends `b` after the last event, built by reversing, appending on the
/// left, and reversing back.
///
/// Requires `[seq[0] seq[last] b]`.
pub fn chain_append_right(ch: &Chain, b: &EventId, sb: &SaturatedBetw) -> Result<Chain> {
    check_appendable(sb, ch, b)?;
    require_betw(sb, ch.first(), ch.last(), b)?;
    let reversed = chain_reverse(ch);
    let grown = chain_append_left(&reversed, b, sb)?;
    Ok(chain_reverse(&grown))
}

/// Orders `x` (a subset of `path`) into a chain by insertion, one event at a
/// time, using betweenness queries against the current endpoints and gaps.
///
/// The result is oriented so that its first event sorts before its last.
pub fn sort_into_chain(sb: &SaturatedBetw, path: &Path, x: &BTreeSet<EventId>) -> Result<Chain> {
    if x.len() < 2 {
        return Err(Error::InvalidChain("need at least two events".into()));
    }
    for e in x {
        if !path.contains(e) {
            return Err(Error::NotOnPath {
                event: e.to_string(),
                path: path.name.clone(),
            });
        }
    }
    let mut items = x.iter();
    let mut seq: Vec<EventId> = vec![items.next().unwrap().clone(), items.next().unwrap().clone()];
    for e in items {
        let first = &seq[0];
        let last = &seq[seq.len() - 1];
        if sb.holds(e, first, last) {
            seq.insert(0, e.clone());
        } else if sb.holds(first, last, e) {
            seq.push(e.clone());
        } else if let Some(pos) = (0..seq.len() - 1).find(|&i| sb.holds(&seq[i], e, &seq[i + 1])) {
            seq.insert(pos + 1, e.clone());
        } else if no_ordering(sb, first, last, e) {
            return Err(Error::Totality(first.to_string(), last.to_string(), e.to_string()));
        } else {
            return Err(Error::Inconsistent(format!(
                "cannot place {e} in ({})",
                seq.iter().join(",")
            )));
        }
    }
    if seq[0] > seq[seq.len() - 1] {
        seq.reverse();
    }
    let ch = Chain {
        path: path.name.clone(),
        seq,
    };
    if !is_chain(sb, &ch) {
        return Err(Error::Inconsistent(format!("{ch} fails the chain condition")));
    }
    Ok(ch)
}

fn no_ordering(sb: &SaturatedBetw, a: &EventId, b: &EventId, c: &EventId) -> bool {
    [a, b, c]
        .into_iter()
        .permutations(3)
        .all(|p| !sb.holds(p[0], p[1], p[2]))
}

/// Number of orderings of `x` that are chains, found by trying every
/// permutation. `x` must have between 3 and `bound` events.
pub fn count_chain_orderings(sb: &SaturatedBetw, x: &BTreeSet<EventId>, bound: usize) -> Result<usize> {
    if x.len() < 3 {
        return Err(Error::InvalidChain("need at least three events".into()));
    }
    if x.len() > bound {
        return Err(Error::BoundExceeded {
            size: x.len(),
            bound,
        });
    }
    let items: Vec<EventId> = x.iter().cloned().collect();
    let n = items.len();
    Ok(items
        .into_iter()
        .permutations(n)
        .filter(|p| is_chain_seq(sb, p))
        .count())
}
