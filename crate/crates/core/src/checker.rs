//! Per-axiom verification of a finite structure.
//!
//! Universally quantified axioms (O2–O5, I3) are decided exactly by
//! enumeration. Axioms with an existential conclusion search for witnesses
//! inside the structure: in [`Mode::WholeUniverse`] the structure is the
//! whole model and a missing witness is a violation; in [`Mode::Sampled`] it
//! is a finite window of a larger model and a missing witness only makes the
//! verdict inconclusive. I5–I7 are checked in sampled mode only for the
//! designated (path, event) pairs, for which the sample is expected to carry
//! every witness.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::{saturate, SaturatedBetw};
use crate::structure::{EventId, Path, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AxiomId {
    O1,
    O2,
    O3,
    O4,
    O5,
    O6,
    I1,
    I2,
    I3,
    I5,
    I6,
    I7,
}

impl AxiomId {
    pub const ALL: [AxiomId; 12] = [
        AxiomId::O1,
        AxiomId::O2,
        AxiomId::O3,
        AxiomId::O4,
        AxiomId::O5,
        AxiomId::O6,
        AxiomId::I1,
        AxiomId::I2,
        AxiomId::I3,
        AxiomId::I5,
        AxiomId::I6,
        AxiomId::I7,
    ];

    /// Axioms whose conclusion asserts the existence of something.
    pub fn is_existential(self) -> bool {
        matches!(
            self,
            AxiomId::O1 | AxiomId::O6 | AxiomId::I1 | AxiomId::I2 | AxiomId::I5 | AxiomId::I6 | AxiomId::I7
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AxiomId::O1 => "O1",
            AxiomId::O2 => "O2",
            AxiomId::O3 => "O3",
            AxiomId::O4 => "O4",
            AxiomId::O5 => "O5",
            AxiomId::O6 => "O6",
            AxiomId::I1 => "I1",
            AxiomId::I2 => "I2",
            AxiomId::I3 => "I3",
            AxiomId::I5 => "I5",
            AxiomId::I6 => "I6",
            AxiomId::I7 => "I7",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::MalformedToken(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    #[serde(rename = "whole-universe")]
    WholeUniverse,
    #[serde(rename = "sampled")]
    Sampled,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::WholeUniverse => "whole-universe",
            Mode::Sampled => "sampled",
        }
    }
}

/// A tuple of event and path names exhibiting a violation (or, for an
/// inconclusive verdict, an instance whose witness was not found).
pub type Witness = Vec<String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Vec<Witness>),
    Inconclusive(Vec<Witness>),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail(_) => "FAIL",
            Verdict::Inconclusive(_) => "INCONCLUSIVE",
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn witnesses(&self) -> &[Witness] {
        match self {
            Verdict::Pass => &[],
            Verdict::Fail(w) | Verdict::Inconclusive(w) => w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DesignatedPair {
    pub path: String,
    pub event: EventId,
}

/// Reads a pairs file: lines `pair <path-name> <event-name>`, with `#`
/// comments and blank lines ignored.
pub fn parse_pairs(text: &str) -> Result<Vec<DesignatedPair>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "pair" {
            return Err(Error::Parse {
                line: i + 1,
                message: "expected `pair <path> <event>`".into(),
            });
        }
        if !crate::structure::is_valid_token(toks[1]) {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("malformed token {:?}", toks[1]),
            });
        }
        out.push(DesignatedPair {
            path: toks[1].to_string(),
            event: EventId::new(toks[2]).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?,
        });
    }
    Ok(out)
}

pub fn serialize_pairs(pairs: &[DesignatedPair]) -> String {
    pairs
        .iter()
        .map(|p| format!("pair {} {}\n", p.path, p.event))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: AxiomId,
    pub verdict: String,
    pub witnesses: Vec<Witness>,
    pub mode: Mode,
}

impl AxiomResult {
    fn new(axiom: AxiomId, verdict: &Verdict, mode: Mode) -> Self {
        AxiomResult {
            axiom,
            verdict: verdict.label().to_string(),
            witnesses: verdict.witnesses().to_vec(),
            mode,
        }
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == "FAIL"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub mode: Mode,
    pub saturated: bool,
    pub designated_pairs: Vec<DesignatedPair>,
    pub results: Vec<AxiomResult>,
}

impl CheckReport {
    pub fn any_fail(&self) -> bool {
        self.results.iter().any(AxiomResult::is_fail)
    }

    pub fn get(&self, ax: AxiomId) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.axiom == ax)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnreachableSet {
    pub path: String,
    pub from_event: EventId,
    pub members: BTreeSet<EventId>,
}

/// `Q(b, ∅)`: events of `q` that share no path with `b`.
pub fn unreachable_from(s: &Structure, q: &Path, b: &EventId) -> Result<UnreachableSet> {
    if !s.has_event(b) {
        return Err(Error::UnknownEvent(b.to_string()));
    }
    if q.contains(b) {
        return Err(Error::OnPath {
            event: b.to_string(),
            path: q.name.clone(),
        });
    }
    let joined: BTreeSet<&EventId> = s.paths_containing(b).flat_map(|p| p.members.iter()).collect();
    Ok(UnreachableSet {
        path: q.name.clone(),
        from_event: b.clone(),
        members: q.members.iter().filter(|x| !joined.contains(x)).cloned().collect(),
    })
}

/// `Q(Qa, R, x, ∅)`: events `Qy` of `q` with `[x Qy Qa]` for which some
/// `Rw ∈ R` has both `Qa` and `Qy` in its unreachable subset of `q`.
pub fn unreachable_via(
    s: &Structure,
    q: &Path,
    qa: &EventId,
    r: &Path,
    x: &EventId,
    sb: &SaturatedBetw,
) -> Result<BTreeSet<EventId>> {
    if q.name == r.name || !q.contains(x) || !r.contains(x) {
        return Err(Error::NotMeetingPoint {
            x: x.to_string(),
            q: q.name.clone(),
            r: r.name.clone(),
        });
    }
    if !q.contains(qa) {
        return Err(Error::NotOnPath {
            event: qa.to_string(),
            path: q.name.clone(),
        });
    }
    let unreach: Vec<BTreeSet<EventId>> = r
        .members
        .iter()
        .filter(|rw| !q.contains(rw))
        .map(|rw| unreachable_from(s, q, rw).map(|u| u.members))
        .collect::<Result<_>>()?;
    Ok(q
        .members
        .iter()
        .filter(|qy| sb.holds(x, qy, qa))
        .filter(|qy| unreach.iter().any(|u| u.contains(qa) && u.contains(*qy)))
        .cloned()
        .collect())
}

/// Node budget for the I6 chain search in sampled mode. Whole-universe
/// checks search exhaustively.
pub const CHAIN_SEARCH_BUDGET: usize = 200_000;

/// Index-based view of a structure for the checks.
struct Ctx<'a> {
    rel: &'a SaturatedBetw,
    paths: Vec<&'a Path>,
    /// Sorted event indices of each path.
    members: Vec<Vec<usize>>,
    on: Vec<Vec<bool>>,
    paths_of: Vec<Vec<usize>>,
    /// Events sharing at least one path.
    co: Vec<Vec<bool>>,
}

impl<'a> Ctx<'a> {
    fn new(s: &'a Structure, rel: &'a SaturatedBetw) -> Self {
        let n = rel.events().len();
        let paths: Vec<&Path> = s.paths().collect();
        let members: Vec<Vec<usize>> = paths
            .iter()
            .map(|p| p.members.iter().map(|e| rel.index_of(e).expect("declared")).collect())
            .collect();
        let mut on = vec![vec![false; n]; paths.len()];
        let mut paths_of = vec![Vec::new(); n];
        for (pi, ms) in members.iter().enumerate() {
            for &e in ms {
                on[pi][e] = true;
                paths_of[e].push(pi);
            }
        }
        let mut co = vec![vec![false; n]; n];
        for ms in &members {
            for &a in ms {
                for &b in ms {
                    co[a][b] = true;
                }
            }
        }
        Ctx {
            rel,
            paths,
            members,
            on,
            paths_of,
            co,
        }
    }

    fn name(&self, e: usize) -> String {
        self.rel.event(e).to_string()
    }

    fn pname(&self, p: usize) -> String {
        self.paths[p].name.clone()
    }

    fn holds(&self, a: usize, b: usize, c: usize) -> bool {
        self.rel.holds_idx(a, b, c)
    }

    fn shared(&self, p: usize, q: usize) -> Vec<usize> {
        self.members[p].iter().copied().filter(|&e| self.on[q][e]).collect()
    }

    fn unreachable(&self, q: usize, b: usize) -> Vec<bool> {
        let mut u = vec![false; self.rel.events().len()];
        for &x in &self.members[q] {
            u[x] = !self.co[b][x];
        }
        u
    }

    fn resolve_pair(&self, pair: &DesignatedPair) -> Result<(usize, usize)> {
        let q = self
            .paths
            .iter()
            .position(|p| p.name == pair.path)
            .ok_or_else(|| Error::MalformedPair(format!("unknown path {:?}", pair.path)))?;
        let b = self
            .rel
            .index_of(&pair.event)
            .ok_or_else(|| Error::MalformedPair(format!("unknown event {:?}", pair.event.as_str())))?;
        if self.on[q][b] {
            return Err(Error::MalformedPair(format!(
                "event {} lies on path {}",
                pair.event, pair.path
            )));
        }
        Ok((q, b))
    }

    /// The (path, off-path event) pairs over which I5–I7 quantify.
    fn incidence_pairs(&self, mode: Mode, designated: &[DesignatedPair]) -> Result<Option<Vec<(usize, usize)>>> {
        match mode {
            Mode::WholeUniverse => {
                let n = self.rel.events().len();
                Ok(Some(
                    (0..self.paths.len())
                        .flat_map(|q| (0..n).filter(move |&b| !self.on[q][b]).map(move |b| (q, b)))
                        .collect(),
                ))
            }
            Mode::Sampled if designated.is_empty() => Ok(None),
            Mode::Sampled => designated.iter().map(|p| self.resolve_pair(p)).collect::<Result<Vec<_>>>().map(Some),
        }
    }
}

#[derive(Default)]
struct Collector {
    fail: Vec<Witness>,
    open: Vec<Witness>,
}

impl Collector {
    fn finish(self) -> Verdict {
        if !self.fail.is_empty() {
            Verdict::Fail(self.fail)
        } else if !self.open.is_empty() {
            Verdict::Inconclusive(self.open)
        } else {
            Verdict::Pass
        }
    }

    /// A missing existential witness: a violation when the structure is the
    /// whole model, otherwise unresolved.
    fn missing(&mut self, mode: Mode, w: Witness) {
        match mode {
            Mode::WholeUniverse => self.fail.push(w),
            Mode::Sampled => self.open.push(w),
        }
    }
}

/// Checks one axiom against `rel`, which is either the literal or the
/// saturated betweenness relation of `s`.
pub fn check_axiom(
    s: &Structure,
    rel: &SaturatedBetw,
    ax: AxiomId,
    mode: Mode,
    designated: &[DesignatedPair],
) -> Result<Verdict> {
    let ctx = Ctx::new(s, rel);
    check_with(&ctx, ax, mode, designated)
}

fn check_with(ctx: &Ctx<'_>, ax: AxiomId, mode: Mode, designated: &[DesignatedPair]) -> Result<Verdict> {
    let mut out = Collector::default();
    let triple = |[a, b, c]: [usize; 3]| vec![ctx.name(a), ctx.name(b), ctx.name(c)];
    let mut triples: Vec<[usize; 3]> = ctx.rel.raw_triples().collect();
    triples.sort_unstable();

    match ax {
        AxiomId::O1 => {
            for t in &triples {
                let [a, b, c] = *t;
                if !ctx.paths_of[a].iter().any(|&p| ctx.on[p][b] && ctx.on[p][c]) {
                    out.missing(mode, triple(*t));
                }
            }
        }
        AxiomId::O2 => {
            for &[a, b, c] in &triples {
                if !ctx.holds(c, b, a) {
                    out.fail.push(triple([a, b, c]));
                }
            }
        }
        AxiomId::O3 => {
            for &[a, b, c] in &triples {
                if a == b || b == c || a == c {
                    out.fail.push(triple([a, b, c]));
                }
            }
        }
        AxiomId::O4 => {
            let mut by_first2: std::collections::HashMap<(usize, usize), Vec<usize>> = Default::default();
            for &[a, b, c] in &triples {
                by_first2.entry((a, b)).or_default().push(c);
            }
            for &[a, b, c] in &triples {
                let Some(ds) = by_first2.get(&(b, c)) else { continue };
                for &d in ds {
                    let distinct = a != b && a != c && a != d && b != c && b != d && c != d;
                    if distinct && !ctx.holds(a, b, d) {
                        out.fail.push(vec![ctx.name(a), ctx.name(b), ctx.name(c), ctx.name(d)]);
                    }
                }
            }
        }
        AxiomId::O5 => {
            let mut seen = BTreeSet::new();
            for ms in &ctx.members {
                for (i, &a) in ms.iter().enumerate() {
                    for (j, &b) in ms.iter().enumerate().skip(i + 1) {
                        for &c in &ms[j + 1..] {
                            let ordered = ctx.holds(a, b, c)
                                || ctx.holds(b, c, a)
                                || ctx.holds(c, a, b)
                                || ctx.holds(c, b, a)
                                || ctx.holds(a, c, b)
                                || ctx.holds(b, a, c);
                            if !ordered && seen.insert([a, b, c]) {
                                out.fail.push(triple([a, b, c]));
                            }
                        }
                    }
                }
            }
        }
        AxiomId::O6 => check_o6(ctx, mode, &mut out),
        AxiomId::I1 => {
            if ctx.rel.events().is_empty() {
                out.missing(mode, Vec::new());
            }
        }
        AxiomId::I2 => {
            let np = ctx.paths.len();
            let mut meet = vec![vec![false; np]; np];
            for p in 0..np {
                for q in 0..np {
                    meet[p][q] = ctx.members[p].iter().any(|&e| ctx.on[q][e]);
                }
            }
            let n = ctx.rel.events().len();
            for a in 0..n {
                for b in a + 1..n {
                    let ok = ctx.paths_of[a]
                        .iter()
                        .any(|&r| ctx.paths_of[b].iter().any(|&s| meet[r][s]));
                    if !ok {
                        out.missing(mode, vec![ctx.name(a), ctx.name(b)]);
                    }
                }
            }
        }
        AxiomId::I3 => {
            for p in 0..ctx.paths.len() {
                for q in p + 1..ctx.paths.len() {
                    let sh = ctx.shared(p, q);
                    if sh.len() >= 2 {
                        out.fail.push(vec![ctx.pname(p), ctx.pname(q), ctx.name(sh[0]), ctx.name(sh[1])]);
                    }
                }
            }
        }
        AxiomId::I5 | AxiomId::I6 | AxiomId::I7 => {
            let Some(pairs) = ctx.incidence_pairs(mode, designated)? else {
                return Ok(Verdict::Inconclusive(Vec::new()));
            };
            for (q, b) in pairs {
                match ax {
                    AxiomId::I5 => check_i5(ctx, q, b, &mut out),
                    AxiomId::I6 => check_i6(ctx, q, b, mode, &mut out),
                    _ => check_i7(ctx, q, b, &mut out),
                }
            }
        }
    }
    Ok(out.finish())
}

fn check_o6(ctx: &Ctx<'_>, mode: Mode, out: &mut Collector) {
    let np = ctx.paths.len();
    let shared: Vec<Vec<Vec<usize>>> = (0..np)
        .map(|p| (0..np).map(|q| if p == q { Vec::new() } else { ctx.shared(p, q) }).collect())
        .collect();
    for q in 0..np {
        for r in 0..np {
            if r == q || shared[q][r].is_empty() {
                continue;
            }
            for s in 0..np {
                if s == q || s == r || shared[q][s].is_empty() || shared[r][s].is_empty() {
                    continue;
                }
                for &a in &shared[q][r] {
                    for &b in &shared[q][s] {
                        for &c in &shared[r][s] {
                            let ds: Vec<usize> =
                                ctx.members[s].iter().copied().filter(|&d| ctx.holds(b, c, d)).collect();
                            if ds.is_empty() {
                                continue;
                            }
                            let es: Vec<usize> =
                                ctx.members[r].iter().copied().filter(|&e| ctx.holds(c, e, a)).collect();
                            for &d in &ds {
                                for &e in &es {
                                    for &t in &ctx.paths_of[d] {
                                        if !ctx.on[t][e] {
                                            continue;
                                        }
                                        let meet = if t == q { ctx.members[q].clone() } else { shared[t][q].clone() };
                                        if meet.iter().any(|&f| ctx.holds(a, f, b)) {
                                            continue;
                                        }
                                        let w = vec![
                                            ctx.pname(q),
                                            ctx.pname(r),
                                            ctx.pname(s),
                                            ctx.name(a),
                                            ctx.name(b),
                                            ctx.name(c),
                                            ctx.name(d),
                                            ctx.name(e),
                                            ctx.pname(t),
                                        ];
                                        if meet.is_empty() {
                                            out.missing(mode, w);
                                        } else {
                                            out.fail.push(w);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

fn check_i5(ctx: &Ctx<'_>, q: usize, b: usize, out: &mut Collector) {
    let u = ctx.unreachable(q, b);
    if ctx.members[q].iter().filter(|&&x| u[x]).count() < 2 {
        out.fail.push(vec![ctx.pname(q), ctx.name(b)]);
    }
}

fn check_i6(ctx: &Ctx<'_>, q: usize, b: usize, mode: Mode, out: &mut Collector) {
    let budget = match mode {
        Mode::WholeUniverse => usize::MAX,
        Mode::Sampled => CHAIN_SEARCH_BUDGET,
    };
    let u = ctx.unreachable(q, b);
    let us: Vec<usize> = ctx.members[q].iter().copied().filter(|&x| u[x]).collect();
    for &x in &us {
        for &z in &us {
            if x == z {
                continue;
            }
            let mut search = ChainSearch {
                ctx,
                q,
                unreachable: &u,
                candidates: &us,
                target: z,
                budget,
            };
            let w = vec![ctx.pname(q), ctx.name(b), ctx.name(x), ctx.name(z)];
            match search.run(x) {
                Some(true) => {}
                Some(false) => out.fail.push(w),
                None => out.open.push(w),
            }
        }
    }
}

/// Depth-first search for a chain `x = Q0, …, Qn = target` of unreachable
/// events satisfying I6 (ii) for every consecutive pair.
struct ChainSearch<'c, 'a> {
    ctx: &'c Ctx<'a>,
    q: usize,
    unreachable: &'c [bool],
    candidates: &'c [usize],
    target: usize,
    budget: usize,
}

impl ChainSearch<'_, '_> {
    fn run(&mut self, start: usize) -> Option<bool> {
        let mut seq = vec![start];
        let found = self.extend(&mut seq);
        if self.budget == 0 && found != Some(true) {
            None
        } else {
            found
        }
    }

    fn gap_ok(&self, from: usize, to: usize) -> bool {
        self.ctx.members[self.q]
            .iter()
            .all(|&y| !self.ctx.holds(from, y, to) || self.unreachable[y])
    }

    fn extend(&mut self, seq: &mut Vec<usize>) -> Option<bool> {
        let order = std::iter::once(self.target).chain(self.candidates.iter().copied().filter(|&c| c != self.target));
        let order: Vec<usize> = order.collect();
        for u in order {
            if self.budget == 0 {
                return None;
            }
            self.budget -= 1;
            if seq.contains(&u) {
                continue;
            }
            let n = seq.len();
            let mut ok = (0..n).all(|i| (i + 1..n).all(|j| self.ctx.holds(seq[i], seq[j], u)));
            if ok && u != self.target {
                ok = seq.iter().all(|&s| self.ctx.holds(s, u, self.target));
            }
            if !ok || !self.gap_ok(seq[n - 1], u) {
                continue;
            }
            if u == self.target {
                return Some(true);
            }
            seq.push(u);
            let r = self.extend(seq);
            seq.pop();
            match r {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
        }
        Some(false)
    }
}

fn check_i7(ctx: &Ctx<'_>, q: usize, b: usize, out: &mut Collector) {
    let u = ctx.unreachable(q, b);
    let ms = &ctx.members[q];
    for &x in ms.iter().filter(|&&x| !u[x]) {
        for &y in ms.iter().filter(|&&y| u[y]) {
            let ok = ms
                .iter()
                .any(|&n| !u[n] && n != x && n != y && ctx.holds(x, y, n));
            if !ok {
                out.fail.push(vec![ctx.pname(q), ctx.name(b), ctx.name(x), ctx.name(y)]);
            }
        }
    }
}

/// Runs every axiom in `axioms` (all of them when empty). Order axioms see
/// the saturated relation only when `use_saturation` is set.
pub fn check_all(
    s: &Structure,
    mode: Mode,
    designated: &[DesignatedPair],
    use_saturation: bool,
    axioms: &[AxiomId],
) -> Result<CheckReport> {
    let rel = if use_saturation {
        saturate(s)
    } else {
        SaturatedBetw::literal(s)
    };
    let ctx = Ctx::new(s, &rel);
    for p in designated {
        ctx.resolve_pair(p)?;
    }
    let selected: Vec<AxiomId> = if axioms.is_empty() {
        AxiomId::ALL.to_vec()
    } else {
        let set: BTreeSet<AxiomId> = axioms.iter().copied().collect();
        set.into_iter().collect()
    };
    let verdicts: Vec<Result<Verdict>> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&ax| {
                let ctx = &ctx;
                scope.spawn(move || check_with(ctx, ax, mode, designated))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("axiom check panicked")).collect()
    });
    let mut results = Vec::with_capacity(selected.len());
    for (ax, v) in selected.iter().zip(verdicts) {
        results.push(AxiomResult::new(*ax, &v?, mode));
    }
    Ok(CheckReport {
        mode,
        saturated: use_saturation,
        designated_pairs: designated.to_vec(),
        results,
    })
}
