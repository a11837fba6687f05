use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn schutz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schutz")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(name)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn check_reports_o4_counterexample() {
    let f = corpus("violates_O4.struct");
    let o = schutz(&["check", p(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l == "O4: FAIL witness=(a,b,c,d)"), "{}", stdout(&o));
}

#[test]
fn check_json_is_parseable() {
    let f = corpus("violates_O2.struct");
    let o = schutz(&["check", p(&f), "--json", "--sampled"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 12);
    assert_eq!(results[1]["axiom"], "O2");
    assert_eq!(results[1]["verdict"], "FAIL");
    assert_eq!(results[1]["witnesses"], serde_json::json!([["a", "b", "c"]]));
    assert_eq!(results[1]["mode"], "sampled");
}

#[test]
fn chain_sorts_a_well_ordered_triple() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("sample.struct");
    fs::write(&f, "event a\nevent b\nevent c\npath Q a b c\nbetw a b c\n").unwrap();
    let o = schutz(&["chain", p(&f), "--path", "Q", "--events", "c,a,b"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(a,b,c)\n");
}

#[test]
fn chain_without_ordering_fails() {
    let f = corpus("violates_O5.struct");
    let o = schutz(&["chain", p(&f), "--path", "Q", "--events", "a,b,c"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("totality"));
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.struct");
    let b = dir.path().join("b.struct");
    for f in [&a, &b] {
        let o = schutz(&["gen", "--lines", "4", "--seed", "7", "--bound", "10", "-o", p(f)]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read(a.with_extension("coords")).unwrap(), fs::read(b.with_extension("coords")).unwrap());
    assert_eq!(fs::read(a.with_extension("pairs")).unwrap(), fs::read(b.with_extension("pairs")).unwrap());
}

#[test]
fn theorems_pick_up_sidecar_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("m.struct");
    schutz(&["gen", "--lines", "4", "--seed", "1", "--bound", "10", "-o", p(&f)]);
    let c = f.with_extension("coords");
    let o = schutz(&["theorems", p(&f), p(&c), "--thm", "T13,T4", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("T13: PASS checked=4 "), "{out}");
    assert!(out.lines().nth(1).unwrap().starts_with("T4: PASS"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.struct");
    fs::write(&f, "event a\nbetw a zz a\n").unwrap();
    let o = schutz(&["check", p(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"zz\""));

    let o = schutz(&["check", p(&corpus("violates_O2.struct")), "--axioms", "O7"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(schutz(&["gen", "--lines", "3", "--bound", "1/0", "-o", p(&f)]).status.code(), Some(2));
    assert_eq!(schutz(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn demo_independence_matches() {
    let o = schutz(&["demo-independence"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("5/5 structures classified as documented"));
}
