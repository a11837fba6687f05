//! Hand-built structures, each violating exactly one axiom when checked in
//! literal sampled mode.

use crate::checker::{check_all, AxiomId, CheckReport, Mode};
use crate::error::Result;
use crate::structure::parse_structure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub violates: AxiomId,
}

pub const CORPUS: [CorpusEntry; 5] = [
    CorpusEntry {
        name: "violates_O2",
        text: include_str!("../corpus/violates_O2.struct"),
        violates: AxiomId::O2,
    },
    CorpusEntry {
        name: "violates_O3",
        text: include_str!("../corpus/violates_O3.struct"),
        violates: AxiomId::O3,
    },
    CorpusEntry {
        name: "violates_O4",
        text: include_str!("../corpus/violates_O4.struct"),
        violates: AxiomId::O4,
    },
    CorpusEntry {
        name: "violates_O5",
        text: include_str!("../corpus/violates_O5.struct"),
        violates: AxiomId::O5,
    },
    CorpusEntry {
        name: "violates_I3",
        text: include_str!("../corpus/violates_I3.struct"),
        violates: AxiomId::I3,
    },
];

impl CorpusEntry {
    /// Documented verdict: FAIL on the target axiom, INCONCLUSIVE on I5–I7
    /// (no designated pairs), PASS everywhere else.
    pub fn expected(&self, ax: AxiomId) -> &'static str {
        if ax == self.violates {
            "FAIL"
        } else if matches!(ax, AxiomId::I5 | AxiomId::I6 | AxiomId::I7) {
            "INCONCLUSIVE"
        } else {
            "PASS"
        }
    }

    pub fn check(&self) -> Result<CheckReport> {
        let s = parse_structure(self.text)?;
        check_all(&s, Mode::Sampled, &[], false, &[])
    }
}
