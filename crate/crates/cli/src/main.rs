use std::collections::BTreeSet;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use schutz_core::chain::{count_chain_orderings, sort_into_chain, Chain, DEFAULT_ORDERING_BOUND};
use schutz_core::checker::{check_all, parse_pairs, serialize_pairs, AxiomId, DesignatedPair, Mode, Witness};
use schutz_core::corpus::CORPUS;
use schutz_core::interval::{decompose_path, interval_intersect, mk_interval, wlog_classify};
use schutz_core::model::{
    check_theorem, generate_sample, parse_coords, serialize_coords, GenConfig, ModelSample, Rational, Theorem,
};
use schutz_core::order::{check_consistency, saturate, ConsistencyWitness};
use schutz_core::structure::{parse_structure, serialize_structure, EventId, Structure};
use schutz_core::Error;

#[derive(Parser)]
#[command(name = "schutz", version, about = "Order and incidence axioms of Minkowski spacetime over finite structures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check axioms against a structure file.
    Check {
        file: PathBuf,
        /// Comma-separated axiom list (default: all).
        #[arg(long, value_delimiter = ',')]
        axioms: Vec<String>,
        /// Treat the structure as a finite window of a larger model.
        #[arg(long)]
        sampled: bool,
        /// Designated (path, event) pairs for I5–I7.
        #[arg(long)]
        pairs: Option<PathBuf>,
        /// Check order axioms against the saturated relation.
        #[arg(long)]
        saturate: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the structure with its betweenness relation closed.
    Saturate {
        file: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Sort events of a path into a chain.
    Chain {
        file: PathBuf,
        #[arg(long)]
        path: String,
        #[arg(long, value_delimiter = ',', required = true)]
        events: Vec<String>,
        #[arg(long)]
        count_orderings: bool,
    },
    /// Interval classification, intersection and path decomposition.
    #[command(group(ArgGroup::new("op").required(true).args(["classify", "intersect", "decompose"])))]
    Interval {
        file: PathBuf,
        #[arg(long)]
        path: String,
        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"])]
        classify: Option<Vec<String>>,
        #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"])]
        intersect: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        decompose: Option<Vec<String>>,
    },
    /// Generate a closed sample of the plane Minkowski model.
    Gen {
        #[arg(long)]
        lines: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        bound: String,
        #[arg(long, default_value_t = 2)]
        witnesses: usize,
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Run model-level theorem checks on a generated sample.
    Theorems {
        structfile: PathBuf,
        coordfile: PathBuf,
        #[arg(long, value_delimiter = ',')]
        thm: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Designated pairs (default: the `.pairs` file next to the structure).
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Check the bundled counterexample corpus against its documented classification.
    DemoIndependence,
}

/// A failed run: the message and the exit code to report.
struct Failure(String, u8);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::I3Violation(..)
            | Error::Totality(..)
            | Error::Inconsistent(_)
            | Error::MissingBetweenness(..)
            | Error::InvalidChain(_) => 1,
            _ => 2,
        };
        Failure(e.to_string(), code)
    }
}

type Run = Result<u8, Failure>;

fn read(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display()), 2))
}

fn write(path: &FsPath, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display()), 2))
}

fn load(path: &FsPath) -> Result<Structure, Failure> {
    parse_structure(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display()), 2))
}

fn event(s: &str) -> Result<EventId, Failure> {
    Ok(EventId::new(s)?)
}

fn tuple(w: &Witness) -> String {
    format!("({})", w.join(","))
}

fn set(xs: &BTreeSet<EventId>) -> String {
    let v: Vec<&str> = xs.iter().map(EventId::as_str).collect();
    format!("{{{}}}", v.join(","))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Check {
            file,
            axioms,
            sampled,
            pairs,
            saturate,
            json,
        } => check(&file, &axioms, sampled, pairs.as_deref(), saturate, json),
        Cmd::Saturate { file, out } => saturate_cmd(&file, out.as_deref()),
        Cmd::Chain {
            file,
            path,
            events,
            count_orderings,
        } => chain(&file, &path, &events, count_orderings),
        Cmd::Interval {
            file,
            path,
            classify,
            intersect,
            decompose,
        } => interval(&file, &path, classify, intersect, decompose),
        Cmd::Gen {
            lines,
            seed,
            bound,
            witnesses,
            out,
        } => gen(lines, seed, &bound, witnesses, &out),
        Cmd::Theorems {
            structfile,
            coordfile,
            thm,
            trials,
            seed,
            pairs,
            json,
        } => theorems(&structfile, &coordfile, &thm, trials, seed, pairs.as_deref(), json),
        Cmd::DemoIndependence => demo(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg, code)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn check(
    file: &FsPath,
    axioms: &[String],
    sampled: bool,
    pairs: Option<&FsPath>,
    use_saturation: bool,
    json: bool,
) -> Run {
    let s = load(file)?;
    let axioms: Vec<AxiomId> = axioms.iter().map(|a| a.parse()).collect::<Result<_, _>>()?;
    let pairs: Vec<DesignatedPair> = match pairs {
        Some(p) => parse_pairs(&read(p)?).map_err(|e| Failure(format!("{}: {e}", p.display()), 2))?,
        None => Vec::new(),
    };
    let mode = if sampled { Mode::Sampled } else { Mode::WholeUniverse };
    let report = check_all(&s, mode, &pairs, use_saturation, &axioms)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable report"));
    } else {
        for r in &report.results {
            match (r.verdict.as_str(), r.witnesses.first()) {
                ("FAIL", Some(w)) if r.witnesses.len() > 1 => {
                    println!("{}: FAIL witness={} (+{} more)", r.axiom, tuple(w), r.witnesses.len() - 1)
                }
                ("FAIL", Some(w)) => println!("{}: FAIL witness={}", r.axiom, tuple(w)),
                ("INCONCLUSIVE", _) if !r.witnesses.is_empty() => {
                    println!("{}: INCONCLUSIVE unresolved={}", r.axiom, r.witnesses.len())
                }
                (v, _) => println!("{}: {v}", r.axiom),
            }
        }
    }
    Ok(u8::from(report.any_fail()))
}

fn saturate_cmd(file: &FsPath, out: Option<&FsPath>) -> Run {
    let s = load(file)?;
    let sb = saturate(&s);
    let text = serialize_structure(&s.with_betw(sb.triple_set())?);
    match out {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    let verdict = check_consistency(&sb);
    for w in &verdict.witnesses {
        match w {
            ConsistencyWitness::O3(t) => eprintln!("inconsistent: O3 {t}"),
            ConsistencyWitness::Thm1(x, y) => eprintln!("inconsistent: Thm1 {x} {y}"),
        }
    }
    Ok(u8::from(!verdict.consistent))
}

fn chain(file: &FsPath, path: &str, events: &[String], count: bool) -> Run {
    let s = load(file)?;
    let sb = saturate(&s);
    let p = s.path(path)?;
    let xs: BTreeSet<EventId> = events.iter().map(|e| event(e)).collect::<Result<_, _>>()?;
    for e in &xs {
        if !s.has_event(e) {
            return Err(Error::UnknownEvent(e.to_string()).into());
        }
    }
    let ch = sort_into_chain(&sb, p, &xs)?;
    println!("{ch}");
    if count {
        println!("orderings: {}", count_chain_orderings(&sb, &xs, DEFAULT_ORDERING_BOUND)?);
    }
    Ok(0)
}

fn interval(
    file: &FsPath,
    path: &str,
    classify: Option<Vec<String>>,
    intersect: Option<Vec<String>>,
    decompose: Option<Vec<String>>,
) -> Run {
    let s = load(file)?;
    let sb = saturate(&s);
    let p = s.path(path)?;
    let four = |v: &[String]| -> Result<Vec<EventId>, Failure> { v.iter().map(|e| event(e)).collect() };
    if let Some(v) = classify {
        let e = four(&v)?;
        let i = mk_interval(&sb, p, &e[0], &e[1])?;
        let j = mk_interval(&sb, p, &e[2], &e[3])?;
        let case = wlog_classify(&sb, &i, &j)?;
        let g = case.relabeling;
        let canon: Vec<&str> = case.canonical.iter().map(EventId::as_str).collect();
        println!(
            "{:?} canonical=({}) swap_intervals={} swap_first={} swap_second={}",
            case.tag,
            canon.join(","),
            g.swap_intervals,
            g.swap_first,
            g.swap_second
        );
    } else if let Some(v) = intersect {
        let e = four(&v)?;
        let i = mk_interval(&sb, p, &e[0], &e[1])?;
        let j = mk_interval(&sb, p, &e[2], &e[3])?;
        println!("{}", interval_intersect(&sb, p, &i, &j)?);
    } else if let Some(v) = decompose {
        let seq = four(&v)?;
        let ch = Chain::new(p, seq)?;
        let d = decompose_path(&sb, p, &ch)?;
        println!("ray {}", set(&d.ray_low));
        for (w, seg) in ch.seq.windows(2).zip(&d.segments) {
            println!("segment {}..{} {}", w[0], w[1], set(seg));
        }
        println!("ray {}", set(&d.ray_high));
        println!("chain {}", set(&d.chain_events));
    }
    Ok(0)
}

fn gen(lines: usize, seed: u64, bound: &str, witnesses: usize, out: &FsPath) -> Run {
    let bound: Rational = bound
        .parse()
        .map_err(|_| Failure(format!("malformed bound {bound:?}"), 2))?;
    let cfg = GenConfig {
        lines,
        seed,
        bound,
        witnesses_per_pair: witnesses,
    };
    let (ms, s) = generate_sample(&cfg)?;
    let coords = out.with_extension("coords");
    let pairs = out.with_extension("pairs");
    write(out, &serialize_structure(&s))?;
    write(&coords, &serialize_coords(&ms))?;
    write(&pairs, &serialize_pairs(&ms.designated))?;
    println!(
        "{}: {} events, {} paths, {} triples; {}; {}",
        out.display(),
        s.events().len(),
        s.path_count(),
        s.betw().len(),
        coords.display(),
        pairs.display()
    );
    Ok(0)
}

fn theorems(
    structfile: &FsPath,
    coordfile: &FsPath,
    thm: &[String],
    trials: usize,
    seed: u64,
    pairs: Option<&FsPath>,
    json: bool,
) -> Run {
    let s = load(structfile)?;
    let coords = parse_coords(&read(coordfile)?).map_err(|e| Failure(format!("{}: {e}", coordfile.display()), 2))?;
    let default_pairs = structfile.with_extension("pairs");
    let pairs_path = pairs.map(FsPath::to_path_buf).or_else(|| default_pairs.exists().then_some(default_pairs));
    let designated = match pairs_path {
        Some(p) => parse_pairs(&read(&p)?).map_err(|e| Failure(format!("{}: {e}", p.display()), 2))?,
        None => Vec::new(),
    };
    let ms = ModelSample::from_structure(&s, &coords, designated)?;
    let thms: Vec<Theorem> = if thm.is_empty() {
        Theorem::ALL.to_vec()
    } else {
        thm.iter().map(|t| t.parse()).collect::<Result<_, _>>()?
    };
    let verdicts = thms
        .iter()
        .map(|&t| check_theorem(&ms, t, trials, seed))
        .collect::<Result<Vec<_>, _>>()?;
    if json {
        println!("{}", serde_json::to_string_pretty(&verdicts).expect("serializable report"));
    } else {
        for v in &verdicts {
            let first = v.violations.first().map(|w| format!(" witness={}", tuple(w))).unwrap_or_default();
            println!(
                "{}: {} checked={} violations={} skips={}{first}",
                v.thm,
                v.label(),
                v.checked,
                v.violations.len(),
                v.skips
            );
        }
    }
    Ok(u8::from(verdicts.iter().any(|v| !v.violations.is_empty())))
}

fn demo() -> Run {
    let short = |v: &str| match v {
        "PASS" => "P",
        "FAIL" => "F",
        _ => "I",
    };
    let mut header = format!("{:<14}", "structure");
    for ax in AxiomId::ALL {
        header.push_str(&format!(" {:<4}", ax.as_str()));
    }
    println!("{header}");
    let mut matched = 0;
    let mut lines = Vec::new();
    for entry in CORPUS {
        let report = entry.check()?;
        let mut row = format!("{:<14}", entry.name);
        let mut ok = true;
        for r in &report.results {
            let exp = entry.expected(r.axiom);
            if exp == r.verdict {
                row.push_str(&format!(" {:<4}", short(&r.verdict)));
            } else {
                ok = false;
                row.push_str(&format!(" {:<4}", format!("{}!{}", short(&r.verdict), short(exp))));
            }
            if r.is_fail() {
                for w in &r.witnesses {
                    lines.push(format!("{}: {} witness={}", entry.name, r.axiom, tuple(w)));
                }
            }
        }
        println!("{row}");
        matched += usize::from(ok);
    }
    println!("P = PASS, F = FAIL, I = INCONCLUSIVE; actual!expected marks a mismatch");
    for l in &lines {
        println!("{l}");
    }
    println!("{matched}/{} structures classified as documented", CORPUS.len());
    Ok(u8::from(matched != CORPUS.len()))
}
