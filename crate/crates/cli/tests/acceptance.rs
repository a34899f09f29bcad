//! Acceptance: the standard report, run twice through the binary.
//!
//! Criteria 1–9 are read back from the first run's `summary.csv`; criterion
//! 10 compares the two output directories byte for byte. One line per
//! criterion is printed (run with `--nocapture` to see them).

use hennie::harness::suite::limits;
use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use tempfile::tempdir;

fn report(dir: &Path) -> String {
    let o = Command::new(env!("CARGO_BIN_EXE_hennie"))
        .args(["report", "--suite", "standard", "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    let code = o.status.code();
    assert!(matches!(code, Some(0) | Some(1)), "report crashed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

/// The tolerance each criterion is judged with, for the log line.
fn tolerance(id: u32) -> String {
    match id {
        1 => "0 mismatches on |w| <= 8 exhaustive + 1000 random |w| <= 64".into(),
        2 => "WR valid, all runs halt, left_extra <= n+n^2, right_extra = 0".into(),
        3 => "0 mismatches on 9 <= |w| <= 12; end-marked + WR".into(),
        4 => "0 mismatches on a^0..a^(3n^2); end-marked + WR".into(),
        5 => format!("0 mismatches on |w| <= 10; step slope ratio <= {}; equal max visits at 64/128", limits::SLOPE_RATIO),
        6 => format!(
            "0 mismatches on n <= |w| <= 10; visit exponent <= {}; state exponent <= {}",
            limits::ONE_WAY_VISIT_EXPONENT,
            limits::ONE_WAY_STATE_EXPONENT
        ),
        7 => format!("bit-exact tables and tapes; visit exponent <= {}", limits::UPDATE_VISIT_EXPONENT),
        8 => "verdicts preserved; |G'| <= k|G|+|S|+2; 2|Q| states, |G|+|G|^2 symbols".into(),
        9 => format!(
            "metric exponents <= {} / {} / {}; wrdtm state exponent <= {}",
            limits::WRDTM_METRIC_EXPONENT,
            limits::WRDHM_LONG_METRIC_EXPONENT,
            limits::ONE_WAY_METRIC_EXPONENT,
            limits::WRDTM_STATE_EXPONENT
        ),
        _ => "byte-identical CSV sets".into(),
    }
}

#[test]
fn acceptance() {
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    let first = report(a.path());
    eprint!("{first}");
    report(b.path());

    let mut failed = Vec::new();
    let mut rd = csv::Reader::from_path(a.path().join("summary.csv")).unwrap();
    let mut seen = 0;
    for rec in rd.records() {
        let rec = rec.unwrap();
        let id: u32 = rec[0].parse().unwrap();
        let pass = &rec[2] == "pass";
        println!(
            "criterion {id:>2} {}: {} [{}] — {}",
            if pass { "PASS" } else { "FAIL" },
            &rec[1],
            tolerance(id),
            &rec[3]
        );
        if !pass {
            failed.push(id);
        }
        seen += 1;
    }
    assert_eq!(seen, 9, "summary.csv lists criteria 1-9");

    let (fa, fb) = (files(a.path()), files(b.path()));
    let differing: Vec<&String> = fa.keys().filter(|k| fb.get(*k) != fa.get(*k)).collect();
    let same = fa.len() == fb.len() && differing.is_empty();
    println!(
        "criterion 10 {}: determinism [{}] — {} files{}",
        if same { "PASS" } else { "FAIL" },
        tolerance(10),
        fa.len(),
        if same { String::new() } else { format!(", differing: {differing:?}") }
    );
    if !same {
        failed.push(10);
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
