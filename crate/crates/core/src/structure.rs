//! Finite incidence/order structures: events, paths and a literal betweenness
//! triple store, together with the line-oriented `.struct` file format.
//!
//! ```text
//! # comment
//! event a
//! event b
//! event c
//! path Q a b c
//! betw a b c
//! ```
//!
//! Events must be declared before any `path` or `betw` line refers to them.
//! Betweenness triples are kept exactly as written: `betw a b c` does not
//! imply `betw c b a` until the relation is saturated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// True when `s` is a non-empty token over `[A-Za-z0-9_.-]`.
pub fn is_valid_token(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|c| c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || c == b'-')
}

fn check_token(s: &str) -> Result<()> {
    if is_valid_token(s) {
        Ok(())
    } else {
        Err(Error::MalformedToken(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(String);

impl EventId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        check_token(&name)?;
        Ok(EventId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Shorthand for building event ids from literals in tests and examples.
///
/// Panics on an invalid token.
pub fn ev(name: &str) -> EventId {
    EventId::new(name).expect("valid event token")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub name: String,
    pub members: BTreeSet<EventId>,
}

impl Path {
    pub fn contains(&self, e: &EventId) -> bool {
        self.members.contains(e)
    }
}

/// A betweenness fact `[a b c]`, stored as asserted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BetwTriple(pub EventId, pub EventId, pub EventId);

impl BetwTriple {
    pub fn reversed(&self) -> BetwTriple {
        BetwTriple(self.2.clone(), self.1.clone(), self.0.clone())
    }

    pub fn has_repeat(&self) -> bool {
        self.0 == self.1 || self.1 == self.2 || self.0 == self.2
    }
}

impl fmt::Display for BetwTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {} {}]", self.0, self.1, self.2)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Structure {
    events: BTreeSet<EventId>,
    paths: BTreeMap<String, Path>,
    betw: BTreeSet<BetwTriple>,
}

impl Structure {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares an event; re-declaring an existing event is a no-op.
    pub fn add_event(&mut self, e: EventId) {
        self.events.insert(e);
    }

    pub fn add_path<I>(&mut self, name: &str, members: I) -> Result<()>
    where
        I: IntoIterator<Item = EventId>,
    {
        check_token(name)?;
        if self.paths.contains_key(name) {
            return Err(Error::DuplicatePath(name.to_string()));
        }
        let mut set = BTreeSet::new();
        for m in members {
            self.require(&m)?;
            set.insert(m);
        }
        if set.len() < 2 {
            return Err(Error::PathTooSmall(name.to_string()));
        }
        self.paths.insert(
            name.to_string(),
            Path {
                name: name.to_string(),
                members: set,
            },
        );
        Ok(())
    }

    pub fn add_betw(&mut self, a: EventId, b: EventId, c: EventId) -> Result<()> {
        self.require(&a)?;
        self.require(&b)?;
        self.require(&c)?;
        self.betw.insert(BetwTriple(a, b, c));
        Ok(())
    }

    fn require(&self, e: &EventId) -> Result<()> {
        if self.events.contains(e) {
            Ok(())
        } else {
            Err(Error::UndeclaredEvent(e.0.clone()))
        }
    }

    pub fn events(&self) -> &BTreeSet<EventId> {
        &self.events
    }

    pub fn has_event(&self, e: &EventId) -> bool {
        self.events.contains(e)
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.paths.values()
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    pub fn path(&self, name: &str) -> Result<&Path> {
        self.paths
            .get(name)
            .ok_or_else(|| Error::UnknownPath(name.to_string()))
    }

    pub fn betw(&self) -> &BTreeSet<BetwTriple> {
        &self.betw
    }

    pub fn paths_containing<'a>(&'a self, e: &'a EventId) -> impl Iterator<Item = &'a Path> + 'a {
        self.paths.values().filter(move |p| p.contains(e))
    }

    /// Replaces the betweenness relation wholesale (used to export a saturated
    /// relation). Every event must already be declared.
    pub fn with_betw(&self, betw: BTreeSet<BetwTriple>) -> Result<Structure> {
        for t in &betw {
            self.require(&t.0)?;
            self.require(&t.1)?;
            self.require(&t.2)?;
        }
        Ok(Structure {
            events: self.events.clone(),
            paths: self.paths.clone(),
            betw,
        })
    }
}

pub fn parse_structure(text: &str) -> Result<Structure> {
    let mut s = Structure::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let wrap = |e: Error| Error::Parse {
            line,
            message: e.to_string(),
        };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        match toks[0] {
            "event" => {
                if toks.len() != 2 {
                    return Err(Error::Parse {
                        line,
                        message: "expected `event <name>`".into(),
                    });
                }
                s.add_event(EventId::new(toks[1]).map_err(wrap)?);
            }
            "path" => {
                if toks.len() < 3 {
                    return Err(Error::Parse {
                        line,
                        message: "expected `path <name> <e1> <e2> ...`".into(),
                    });
                }
                let members = toks[2..]
                    .iter()
                    .map(|t| EventId::new(*t))
                    .collect::<Result<Vec<_>>>()
                    .map_err(wrap)?;
                s.add_path(toks[1], members).map_err(wrap)?;
            }
            "betw" => {
                if toks.len() != 4 {
                    return Err(Error::Parse {
                        line,
                        message: "expected `betw <a> <b> <c>`".into(),
                    });
                }
                let a = EventId::new(toks[1]).map_err(wrap)?;
                let b = EventId::new(toks[2]).map_err(wrap)?;
                let c = EventId::new(toks[3]).map_err(wrap)?;
                s.add_betw(a, b, c).map_err(wrap)?;
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown directive {other:?}"),
                })
            }
        }
    }
    Ok(s)
}

/// Canonical text: events, then paths by name with sorted members, then
/// triples, each block in lexicographic order.
pub fn serialize_structure(s: &Structure) -> String {
    let mut out = String::new();
    for e in &s.events {
        out.push_str("event ");
        out.push_str(e.as_str());
        out.push('\n');
    }
    for p in s.paths.values() {
        out.push_str("path ");
        out.push_str(&p.name);
        for m in &p.members {
            out.push(' ');
            out.push_str(m.as_str());
        }
        out.push('\n');
    }
    for t in &s.betw {
        out.push_str(&format!("betw {} {} {}\n", t.0, t.1, t.2));
    }
    out
}

/// The unique path containing every event of `evs`, if any.
///
/// Two distinct paths containing the same pair of events is an I3 violation
/// and is returned as an error naming both paths.
pub fn collinear<'a>(s: &'a Structure, evs: &BTreeSet<EventId>) -> Result<Option<&'a Path>> {
    for e in evs {
        if !s.has_event(e) {
            return Err(Error::UnknownEvent(e.to_string()));
        }
    }
    let mut found: Option<&Path> = None;
    for p in s.paths() {
        if evs.iter().all(|e| p.contains(e)) {
            if let Some(q) = found {
                if evs.len() >= 2 {
                    return Err(Error::I3Violation(q.name.clone(), p.name.clone()));
                }
            } else {
                found = Some(p);
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "event a\nevent b\nevent c\npath Q a b c\nbetw a b c\n";

    #[test]
    fn parse_small_structure() {
        let s = parse_structure(SMALL).unwrap();
        assert_eq!(s.events().len(), 3);
        assert_eq!(s.path_count(), 1);
        assert_eq!(s.betw().len(), 1);
    }

    #[test]
    fn undeclared_event_in_path() {
        let err = parse_structure("path Q a b").unwrap_err();
        assert!(err.to_string().contains("undeclared event \"a\""), "{err}");
    }

    #[test]
    fn path_needs_two_distinct_members() {
        let err = parse_structure("event a\npath Q a a").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(err.to_string().contains("at least two"));
    }

    #[test]
    fn malformed_token_rejected() {
        let err = parse_structure("event a$b").unwrap_err();
        assert!(err.to_string().contains("malformed token"));
    }

    #[test]
    fn duplicate_path_rejected() {
        let err = parse_structure("event a\nevent b\npath Q a b\npath Q b a").unwrap_err();
        assert!(err.to_string().contains("duplicate path"));
    }

    #[test]
    fn unknown_directive_rejected() {
        assert!(parse_structure("point a").is_err());
        assert!(parse_structure("event a\nbetw a a").is_err());
    }

    #[test]
    fn comments_and_blanks_ignored_and_triples_deduplicated() {
        let s = parse_structure("# hi\n\nevent a\nevent b\nevent c\nbetw a b c\nbetw a b c\n").unwrap();
        assert_eq!(s.betw().len(), 1);
    }

    #[test]
    fn empty_structure_serializes_to_empty_document() {
        assert_eq!(serialize_structure(&Structure::new()), "");
    }

    #[test]
    fn serialization_sorts_lines() {
        let s = parse_structure("event c\nevent a\nevent b\nbetw a b c\npath Q c b a\n").unwrap();
        assert_eq!(serialize_structure(&s), SMALL);
    }

    #[test]
    fn collinear_finds_unique_path() {
        let s = parse_structure("event a\nevent b\nevent c\nevent d\npath Q a b c\npath R c d").unwrap();
        let q = collinear(&s, &[ev("a"), ev("b"), ev("c")].into()).unwrap();
        assert_eq!(q.unwrap().name, "Q");
        assert!(collinear(&s, &[ev("a"), ev("d")].into()).unwrap().is_none());
    }

    #[test]
    fn collinear_reports_i3_violation() {
        let s = parse_structure("event a\nevent b\npath Q a b\npath R a b").unwrap();
        let err = collinear(&s, &[ev("a"), ev("b")].into()).unwrap_err();
        assert_eq!(err, Error::I3Violation("Q".into(), "R".into()));
    }
}
