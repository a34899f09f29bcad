//! The binary's exit-code contract and file round trips.

use std::path::Path;
use std::process::{Command, Output};
use tempfile::tempdir;

const SIGMA_STAR: &str = "\
kind: 2nfa
states: s
alphabet: a b
initial: s
final: s
trans: s < -> s R
trans: s a -> s R
trans: s b -> s R
trans: s > -> s R
";

const SELF_REWRITE: &str = "\
kind: dtm
flags:
input: a
blank: _
work:
states: q
initial: q
final:
trans: q a -> q a R
";

fn hennie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hennie")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn convert_run_check_equiv() {
    let d = tempdir().unwrap();
    let a = d.path().join("all.2nfa");
    let m = d.path().join("all.dtm");
    std::fs::write(&a, SIGMA_STAR).unwrap();

    let o = hennie(&["convert", "--in", p(&a), "--construction", "2nfa-wrdtm", "--out", p(&m)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("size_metric"));
    let text = std::fs::read_to_string(&m).unwrap();
    assert!(text.lines().any(|l| l.starts_with("rank:")), "weight-reducing witness written");

    let csv = d.path().join("visits.csv");
    let o = hennie(&["run", "--machine", p(&m), "--input", "abba", "--profile", p(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("outcome accepted\n"));
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("cell_index,visits\n"));

    assert_eq!(hennie(&["check", "--machine", p(&m), "--property", "wr"]).status.code(), Some(0));
    // The machine uses blank cells left of the input.
    assert_eq!(hennie(&["check", "--machine", p(&m), "--property", "endmarked"]).status.code(), Some(1));
    let o = hennie(&["check", "--machine", p(&m), "--property", "halting-on", "--inputs", "", "ab", "bbb"]);
    assert_eq!(o.status.code(), Some(0));

    let o = hennie(&[
        "equiv", "--automaton", p(&a), "--machine", p(&m), "--min-len", "0", "--max-len", "6", "--random", "40",
        "--max-random-len", "20", "--seed", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("127 words: certified"));
}

#[test]
fn lemma_wr_pass_removes_rewrite_cycles() {
    let d = tempdir().unwrap();
    let a = d.path().join("all.2nfa");
    let raw = d.path().join("raw.dtm");
    let wr = d.path().join("wr.dtm");
    std::fs::write(&a, SIGMA_STAR).unwrap();
    let o = hennie(&["convert", "--in", p(&a), "--construction", "2nfa-wrdtm", "--skip-wr-pass", "--out", p(&raw)]);
    assert_eq!(o.status.code(), Some(0));
    let o = hennie(&["check", "--machine", p(&raw), "--property", "wr"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("rewrite cycle"));
    let o = hennie(&["convert", "--in", p(&raw), "--construction", "lemma-wr", "--param", "40", "--out", p(&wr)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(hennie(&["check", "--machine", p(&wr), "--property", "wr"]).status.code(), Some(0));
}

#[test]
fn self_rewrite_prints_its_cycle() {
    let d = tempdir().unwrap();
    let m = d.path().join("loop.dtm");
    std::fs::write(&m, SELF_REWRITE).unwrap();
    let o = hennie(&["check", "--machine", p(&m), "--property", "wr"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("cycle a -> a"), "{}", stdout(&o));
}

#[test]
fn equiv_reports_mismatches_with_exit_one() {
    let d = tempdir().unwrap();
    let a = d.path().join("all.2nfa");
    let m = d.path().join("loop.dtm");
    std::fs::write(&a, SIGMA_STAR.replace("alphabet: a b", "alphabet: a").replace("trans: s b -> s R\n", ""))
        .unwrap();
    std::fs::write(&m, SELF_REWRITE).unwrap();
    // The machine walks right forever; the divergence detector rejects.
    let o = hennie(&["equiv", "--automaton", p(&a), "--machine", p(&m), "--min-len", "0", "--max-len", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("mismatch ε"), "{}", stdout(&o));
}

#[test]
fn usage_and_domain_errors_exit_two() {
    let d = tempdir().unwrap();
    let a = d.path().join("all.2nfa");
    std::fs::write(&a, SIGMA_STAR).unwrap();
    let out = d.path().join("x.dtm");
    let o = hennie(&["convert", "--in", p(&a), "--construction", "u2nfa-wrdhm", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unary"));
    assert_eq!(hennie(&["report", "--suite", "", "--out", p(d.path())]).status.code(), Some(2));
    assert_eq!(hennie(&["frobnicate"]).status.code(), Some(2));
    let bad = d.path().join("bad.2nfa");
    std::fs::write(&bad, SIGMA_STAR.replace("initial: s", "start: s")).unwrap();
    let o = hennie(&["convert", "--in", p(&bad), "--construction", "2nfa-wrdtm", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4: unknown directive"));
}
