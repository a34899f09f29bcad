//! The standard measurement suite: corpus equivalence, checker runs,
//! profiles and size fits, with one verdict per acceptance criterion and a
//! set of CSV tables. Everything is seeded; two runs produce identical
//! output.

use super::equiv::{equiv_check, EquivPlan, EquivReport, DEFAULT_BUDGET};
use super::families::{kth_from_end, ping_pong, unary_divisibility};
use super::fit::{fit_power, PowerFit};
use super::gen::{random_1nfa, random_2nfa, random_unary_2nfa, random_word, GeneratorSpec};
use super::profile::{profile_scaling, profile_words, ProfileRow};
use crate::automata::{
    gamma_tau_oracle, tables_of_prefix, update_tables, OneWayNfa, ReachTables, TapeSymbol, TwoWayNfa,
};
use crate::builder::{fold_to_hennie, wr_from_visit_bounded};
use crate::constructions::{
    build_1nfa_to_dhm, build_1nfa_to_wrdhm_long, build_2nfa_to_dhm, build_2nfa_to_wrdhm_long,
    build_2nfa_to_wrdtm, build_unary_2nfa_to_wrdhm, build_update_machine, sliding_machine, Automaton,
    Construction, Guarantee,
};
use crate::constructions::update::WindowKind;
use crate::tm::{
    check_end_marked, check_weight_reducing, input_sym, run, run_with_tape, Dtm, MachineCore, RunOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Tolerances of the scaling checks.
pub mod limits {
    /// Max/min ratio of steps/|w| across the profiled lengths.
    pub const SLOPE_RATIO: f64 = 2.0;
    /// Fitted exponent of per-cell visits of the powerset machine.
    pub const ONE_WAY_VISIT_EXPONENT: f64 = 2.5;
    /// Fitted exponent of the powerset machine's state count.
    pub const ONE_WAY_STATE_EXPONENT: f64 = 3.5;
    /// Fitted exponent of per-cell visits of the table-update machine.
    pub const UPDATE_VISIT_EXPONENT: f64 = 5.5;
    /// size_metric exponents (stated exponent + 1).
    pub const WRDTM_METRIC_EXPONENT: f64 = 14.0;
    pub const WRDTM_STATE_EXPONENT: f64 = 8.0;
    pub const WRDHM_LONG_METRIC_EXPONENT: f64 = 21.0;
    pub const ONE_WAY_METRIC_EXPONENT: f64 = 8.0;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Verdicts and CSV tables (file name, contents) of a suite run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionResult>,
    pub files: Vec<(String, String)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

/// The fixed random corpus: 20 two-way automata over {a, b} with
/// n = 2 + seed mod 3, seeds 0..20.
pub fn standard_corpus() -> Vec<(String, TwoWayNfa)> {
    (0..20u64)
        .map(|seed| {
            let n = 2 + seed as usize % 3;
            (format!("rand-{seed}"), random_2nfa(&GeneratorSpec::new(n, 2, seed)))
        })
        .collect()
}

/// Witness-family members added to the corpus for the full-domain check.
pub fn corpus_witnesses() -> Vec<(String, TwoWayNfa)> {
    vec![
        ("kth-from-end-2".into(), TwoWayNfa::from_one_way(&kth_from_end(2))),
        ("unary-div-3".into(), unary_divisibility(&[3])),
        ("ping-pong-1".into(), ping_pong(1)),
    ]
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).unwrap();
        for r in &self.rows {
            w.write_record(r).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

const EQUIV_HEADER: [&str; 15] = [
    "criterion",
    "construction",
    "automaton",
    "n",
    "range",
    "words",
    "verdict",
    "mismatches",
    "outside_guarantee",
    "inconclusive",
    "max_visits",
    "steps",
    "states",
    "work_symbols",
    "size_metric",
];

fn equiv_row(crit: u32, c: Construction, name: &str, n: usize, r: &EquivReport, m: &Dtm) -> Vec<String> {
    let s = m.size_report();
    let range = if r.exhaustive {
        format!("{}..={}", r.min_len, r.max_len)
    } else {
        format!("random {}..={}", r.min_len, r.max_len)
    };
    vec![
        crit.to_string(),
        c.name().to_string(),
        name.to_string(),
        n.to_string(),
        range,
        r.tested.to_string(),
        r.verdict().to_string(),
        r.mismatches.len().to_string(),
        r.outside_guarantee.len().to_string(),
        r.inconclusive.len().to_string(),
        r.max_visits.to_string(),
        r.max_steps.to_string(),
        s.states.to_string(),
        s.work_symbols.to_string(),
        s.size_metric.to_string(),
    ]
}

fn fmt_f(x: f64) -> String {
    format!("{x:.4}")
}

fn fit_row(crit: u32, quantity: &str, subject: &str, pts: &[(f64, f64)], fit: Option<PowerFit>, limit: f64) -> (Vec<String>, bool) {
    let ok = fit.is_some_and(|f| f.d <= limit);
    let (c, d) = fit.map_or(("nan".into(), "nan".into()), |f| (fmt_f(f.c), fmt_f(f.d)));
    (
        vec![
            crit.to_string(),
            quantity.to_string(),
            subject.to_string(),
            pts.len().to_string(),
            c,
            d,
            fmt_f(limit),
            if ok { "pass" } else { "fail" }.to_string(),
        ],
        ok,
    )
}

const FIT_HEADER: [&str; 8] = ["criterion", "quantity", "subject", "points", "c", "d", "d_limit", "verdict"];

struct Ctx {
    equiv: Table,
    fits: Table,
    profiles: Table,
    lemmas: Table,
    update: Table,
    sizes: Table,
}

fn failures(list: &[String]) -> String {
    const SHOW: usize = 5;
    let mut s = list.iter().take(SHOW).cloned().collect::<Vec<_>>().join("; ");
    if list.len() > SHOW {
        s.push_str(&format!("; … {} more", list.len() - SHOW));
    }
    s
}

fn verdict(id: u32, title: &'static str, fails: &[String], ok_detail: String) -> CriterionResult {
    if fails.is_empty() {
        CriterionResult { id, title, passed: true, detail: ok_detail }
    } else {
        CriterionResult { id, title, passed: false, detail: failures(fails) }
    }
}

/// Criteria 1 and 2: the halting weight-reducing machine on the corpus.
fn wrdtm_corpus(ctx: &mut Ctx, log: &mut dyn FnMut(&str)) -> [CriterionResult; 2] {
    let c = Construction::TwoWayWrdtm;
    let (mut f1, mut f2) = (Vec::new(), Vec::new());
    let (mut words, mut machines) = (0u64, 0usize);
    let all: Vec<_> = standard_corpus().into_iter().chain(corpus_witnesses()).collect();
    for (idx, (name, a)) in all.iter().enumerate() {
        log(&format!("criteria 1-2: {name}"));
        let n = a.num_states();
        let m = match build_2nfa_to_wrdtm(a) {
            Ok(m) => m,
            Err(e) => {
                f1.push(format!("{name}: build failed: {e}"));
                f2.push(format!("{name}: build failed"));
                continue;
            }
        };
        machines += 1;
        let auto = Automaton::TwoWay(a.clone());
        let ex = equiv_check(&auto, &m, &EquivPlan::exhaustive(0, 8), Guarantee::All);
        let rnd = equiv_check(&auto, &m, &EquivPlan::random(0, 64, 1000, 1000 + idx as u64), Guarantee::All);
        ctx.equiv.push(equiv_row(1, c, name, n, &ex, &m));
        ctx.equiv.push(equiv_row(1, c, name, n, &rnd, &m));
        words += ex.tested + rnd.tested;
        if !ex.certified() {
            f1.push(format!("{name}: exhaustive 0..=8 {}", ex.verdict()));
        }
        if !rnd.passed() {
            f1.push(format!("{name}: random {}", rnd.verdict()));
        }
        if !check_weight_reducing(&m).is_valid() {
            f2.push(format!("{name}: not weight-reducing"));
        }
        for r in [&ex, &rnd] {
            if !r.inconclusive.is_empty() || r.diverged > 0 {
                f2.push(format!("{name}: {} runs did not halt", r.inconclusive.len() as u64 + r.diverged));
            }
            let bound = (n + n * n) as u64;
            if r.max_left_extra > bound || r.max_right_extra > 0 {
                f2.push(format!(
                    "{name}: extra cells left {} (bound {bound}) right {}",
                    r.max_left_extra, r.max_right_extra
                ));
            }
        }
    }
    [
        verdict(
            1,
            "oracle equivalence, full domain",
            &f1,
            format!("{machines} machines, {words} words, 0 mismatches"),
        ),
        verdict(
            2,
            "weight-reducing and halting certification",
            &f2,
            format!("{machines} machines weight-reducing, all runs halt, left_extra <= n+n^2, right_extra = 0"),
        ),
    ]
}

/// Criterion 3: the long-input machine on the n = 3 corpus.
fn long_inputs(ctx: &mut Ctx, log: &mut dyn FnMut(&str)) -> CriterionResult {
    let c = Construction::TwoWayWrdhmLong;
    let mut fails = Vec::new();
    let (mut outside, mut count) = (0, 0);
    for (name, a) in standard_corpus().into_iter().filter(|(_, a)| a.num_states() == 3) {
        log(&format!("criterion 3: {name}"));
        let n = a.num_states();
        let m = match build_2nfa_to_wrdhm_long(&a) {
            Ok(m) => m,
            Err(e) => {
                fails.push(format!("{name}: build failed: {e}"));
                continue;
            }
        };
        count += 1;
        let auto = Automaton::TwoWay(a);
        let g = c.guarantee(n);
        let short = equiv_check(&auto, &m, &EquivPlan::exhaustive(0, n * n - 1), g);
        let long = equiv_check(&auto, &m, &EquivPlan::exhaustive(n * n, 12), g);
        ctx.equiv.push(equiv_row(3, c, &name, n, &short, &m));
        ctx.equiv.push(equiv_row(3, c, &name, n, &long, &m));
        outside += short.outside_guarantee.len();
        if !long.certified() {
            fails.push(format!("{name}: {}..=12 {}", n * n, long.verdict()));
        }
        if !short.passed() {
            fails.push(format!("{name}: short inputs {}", short.verdict()));
        }
        if let Err(e) = check_end_marked(&m) {
            fails.push(format!("{name}: not end-marked: {e}"));
        }
        if !check_weight_reducing(&m).is_valid() {
            fails.push(format!("{name}: not weight-reducing"));
        }
    }
    verdict(
        3,
        "long-input agreement",
        &fails,
        format!("{count} machines certified on 9..=12, end-marked and weight-reducing; {outside} out-of-guarantee mismatches below n^2"),
    )
}

/// Criterion 4: unary automata on every length up to 3n².
fn unary(ctx: &mut Ctx, log: &mut dyn FnMut(&str)) -> CriterionResult {
    let c = Construction::UnaryWrdhm;
    let mut fails = Vec::new();
    for seed in 0..10u64 {
        let n = 1 + seed as usize % 4;
        let name = format!("unary-{seed}");
        log(&format!("criterion 4: {name}"));
        let a = random_unary_2nfa(&GeneratorSpec::unary(n, seed));
        let m = match build_unary_2nfa_to_wrdhm(&a) {
            Ok(m) => m,
            Err(e) => {
                fails.push(format!("{name}: build failed: {e}"));
                continue;
            }
        };
        let r = equiv_check(&Automaton::TwoWay(a), &m, &EquivPlan::exhaustive(0, 3 * n * n), Guarantee::All);
        ctx.equiv.push(equiv_row(4, c, &name, n, &r, &m));
        if !r.certified() {
            fails.push(format!("{name}: {}", r.verdict()));
        }
        if let Err(e) = check_end_marked(&m) {
            fails.push(format!("{name}: not end-marked: {e}"));
        }
        if !check_weight_reducing(&m).is_valid() {
            fails.push(format!("{name}: not weight-reducing"));
        }
    }
    verdict(4, "unary full equivalence", &fails, "10 machines certified on a^0..a^(3n^2)".into())
}

const PROFILE_HEADER: [&str; 11] = [
    "criterion",
    "construction",
    "automaton",
    "sample",
    "len",
    "samples",
    "max_steps",
    "max_visits",
    "left_extra",
    "right_extra",
    "inconclusive",
];

fn profile_rows(ctx: &mut Ctx, crit: u32, c: Construction, name: &str, sample: &str, rows: &[ProfileRow]) {
    for r in rows {
        ctx.profiles.push(vec![
            crit.to_string(),
            c.name().to_string(),
            name.to_string(),
            sample.to_string(),
            r.len.to_string(),
            r.samples.to_string(),
            r.max_steps.to_string(),
            r.max_visits.to_string(),
            r.left_extra.to_string(),
            r.right_extra.to_string(),
            r.inconclusive.to_string(),
        ]);
    }
}

/// Block length of the periodic words used for the visit comparison.
const PERIOD: usize = 8;

/// Criterion 5: the Hennie machine across its three regimes, plus linear
/// time and constant visits on long inputs.
fn hennie(ctx: &mut Ctx, log: &mut dyn FnMut(&str)) -> CriterionResult {
    let c = Construction::TwoWayDhm;
    let mut fails = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    let mut count = 0;
    for (idx, (name, a)) in standard_corpus().into_iter().enumerate().filter(|(_, (_, a))| a.num_states() == 3) {
        log(&format!("criterion 5: {name}"));
        let n = a.num_states();
        let m = match build_2nfa_to_dhm(&a) {
            Ok(m) => m,
            Err(e) => {
                fails.push(format!("{name}: build failed: {e}"));
                continue;
            }
        };
        count += 1;
        let r = equiv_check(&Automaton::TwoWay(a), &m, &EquivPlan::exhaustive(0, 10), Guarantee::All);
        ctx.equiv.push(equiv_row(5, c, &name, n, &r, &m));
        if !r.certified() {
            fails.push(format!("{name}: 0..=10 {}", r.verdict()));
        }
        let rows = match profile_scaling(&m, &[16, 32, 64, 128], 4, 500 + idx as u64, None) {
            Ok(rows) => rows,
            Err(e) => {
                fails.push(format!("{name}: profile failed: {e}"));
                continue;
            }
        };
        profile_rows(ctx, 5, c, &name, "random", &rows);
        // Visits are compared on periodic words u^k: the content statistics
        // are the same at both lengths, so only a dependence on |w| itself
        // can make the maxima differ.
        let mut rng = ChaCha8Rng::seed_from_u64(600 + idx as u64);
        let blocks: Vec<Vec<usize>> = (0..4).map(|_| random_word(&mut rng, 2, PERIOD)).collect();
        let groups: Vec<Vec<Vec<usize>>> =
            [64, 128].iter().map(|&l| blocks.iter().map(|u| u.repeat(l / PERIOD)).collect()).collect();
        let periodic = match profile_words(&m, &groups, None) {
            Ok(rows) => rows,
            Err(e) => {
                fails.push(format!("{name}: profile failed: {e}"));
                continue;
            }
        };
        profile_rows(ctx, 5, c, &name, &format!("periodic-{PERIOD}"), &periodic);
        if rows.iter().chain(&periodic).any(|r| r.inconclusive > 0) {
            fails.push(format!("{name}: profiled run exhausted its budget"));
            continue;
        }
        let slopes: Vec<f64> = rows.iter().map(|r| r.max_steps as f64 / r.len as f64).collect();
        let max = slopes.iter().cloned().fold(f64::MIN, f64::max);
        let min = slopes.iter().cloned().fold(f64::MAX, f64::min);
        let ratio = max / min;
        worst_ratio = worst_ratio.max(ratio);
        if ratio > limits::SLOPE_RATIO {
            fails.push(format!("{name}: step slope ratio {ratio:.3} > {}", limits::SLOPE_RATIO));
        }
        if periodic[0].max_visits != periodic[1].max_visits {
            fails.push(format!(
                "{name}: max visits {} at |w|=64 vs {} at |w|=128",
                periodic[0].max_visits, periodic[1].max_visits
            ));
        }
    }
    verdict(
        5,
        "Hennie machine, three regimes",
        &fails,
        format!("{count} machines certified on 0..=10; worst step-slope ratio {worst_ratio:.3}; visits equal at 64 and 128"),
    )
}

/// Criterion 6: the powerset machine on k-th-from-end and random 1NFAs.
fn one_way(ctx: &mut Ctx, log: &mut dyn FnMut(&str)) -> CriterionResult {
    let c = Construction::OneWayWrdhmLong;
    let mut fails = Vec::new();
    let mut set: Vec<(String, OneWayNfa)> =
        [3, 4, 5].into_iter().map(|k| (format!("kth-from-end-{k}"), kth_from_end(k))).collect();
    for seed in 0..10u64 {
        let n = 2 + seed as usize % 5;
        set.push((format!("rand1-{seed}"), random_1nfa(&GeneratorSpec::new(n, 2, seed))));
    }
    let (mut visits, mut states) = (Vec::new(), Vec::new());
    let mut c_states: f64 = 0.0;
    for (name, a) in set {
        log(&format!("criterion 6: {name}"));
        let n = a.num_states();
        let sigma = a.alphabet().len();
        let m = match build_1nfa_to_wrdhm_long(&a) {
            Ok(m) => m,
            Err(e) => {
                fails.push(format!("{name}: build failed: {e}"));
                continue;
            }
        };
        let r = equiv_check(&Automaton::OneWay(a), &m, &EquivPlan::exhaustive(n, 10), c.guarantee(n));
        ctx.equiv.push(equiv_row(6, c, &name, n, &r, &m));
        if !r.certified() {
            fails.push(format!("{name}: {n}..=10 {}", r.verdict()));
        }
        visits.push((n as f64, r.max_visits as f64));
        let q = m.num_states() as f64;
        states.push((n as f64, q));
        c_states = c_states.max(q / (sigma as f64 * (n as f64).powi(3)));
    }
    let fv = fit_power(&visits);
    let c_visits = visits.iter().map(|&(n, v)| v / (n * n)).fold(0.0, f64::max);
    let (row, ok) = fit_row(6, "max_visits", c.name(), &visits, fv, limits::ONE_WAY_VISIT_EXPONENT);
    ctx.fits.push(row);
    if !ok {
        fails.push(format!("visit fit {fv:?} exceeds exponent {}", limits::ONE_WAY_VISIT_EXPONENT));
    }
    let fs = fit_power(&states);
    let (row, ok) = fit_row(6, "states", c.name(), &states, fs, limits::ONE_WAY_STATE_EXPONENT);
    ctx.fits.push(row);
    if !ok {
        fails.push(format!("state fit {fs:?} exceeds exponent {}", limits::ONE_WAY_STATE_EXPONENT));
    }
    verdict(
        6,
        "one-way powerset machine",
        &fails,
        format!(
            "13 machines certified on n..=10; visits <= {c_visits:.3}*n^2 (fit d = {:.3}); states <= {c_states:.3}*|S|*n^3 (fit d = {:.3})",
            fv.map_or(f64::NAN, |f| f.d),
            fs.map_or(f64::NAN, |f| f.d)
        ),
    )
}

fn random_symbol(rng: &mut impl Rng, sigma: usize) -> TapeSymbol {
    let x = rng.gen_range(0..=sigma);
    if x == sigma {
        TapeSymbol::RightEnd
    } else {
        TapeSymbol::Input(x)
    }
}

fn symbol_label(x: TapeSymbol) -> String {
    match x {
        TapeSymbol::LeftEnd => "<".into(),
        TapeSymbol::RightEnd => ">".into(),
        TapeSymbol::Input(i) => ((b'a' + i as u8) as char).to_string(),
    }
}

/// Criterion 7: table calculus against its definition, and the compiled
/// update machine against the table calculus.
fn table_calculus(ctx: &mut Ctx, log: &mut dyn FnMut(&str)) -> CriterionResult {
    log("criterion 7: table calculus");
    let mut fails = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in 0..10_000 {
        let n = rng.gen_range(2..=5);
        let a = random_2nfa(&GeneratorSpec::new(n, 2, rng.gen()));
        let len = rng.gen_range(0..=8);
        let z = random_word(&mut rng, 2, len);
        let x = random_symbol(&mut rng, 2);
        let got = tables_of_prefix(&a, &z).and_then(|tz| update_tables(&a, &tz, x));
        let mut zx = vec![TapeSymbol::LeftEnd];
        zx.extend(z.iter().map(|&s| TapeSymbol::Input(s)));
        zx.push(x);
        let want = gamma_tau_oracle(&a, &zx);
        match (got, want) {
            (Ok(g), Ok(w)) if g == w => {}
            (g, w) => fails.push(format!("triple {t}: update {g:?} vs oracle {w:?}")),
        }
    }
    log("criterion 7: update machines");
    let mut visits = Vec::new();
    for t in 0..100usize {
        let n = 2 + t % 4;
        let a = random_2nfa(&GeneratorSpec::new(n, 2, rng.gen()));
        let len = rng.gen_range(0..=8);
        let z = random_word(&mut rng, 2, len);
        let x = random_symbol(&mut rng, 2);
        let tz = tables_of_prefix(&a, &z).expect("corpus automaton");
        let want = update_tables(&a, &tz, x).expect("valid symbol").to_bits();
        let m = match build_update_machine(&a, x) {
            Ok(m) => m,
            Err(e) => {
                fails.push(format!("machine {t}: build failed: {e}"));
                continue;
            }
        };
        let w: Vec<usize> = tz.to_bits().iter().map(|&b| b as usize).collect();
        let (r, tape) = match run_with_tape(&m, &w, RunOptions::with_budget(DEFAULT_BUDGET)) {
            Ok(v) => v,
            Err(e) => {
                fails.push(format!("machine {t}: run failed: {e}"));
                continue;
            }
        };
        let cells = tape.contents();
        let out: Vec<bool> = (1..=w.len() as i64).map(|c| cells.get(&c) == Some(&input_sym(1))).collect();
        let ok = r.accepted() && out == want;
        if !ok {
            fails.push(format!("machine {t}: output differs from the table update"));
        }
        if ReachTables::from_bits(n, &out).is_none() {
            fails.push(format!("machine {t}: output is not a table encoding"));
        }
        visits.push((n as f64, r.max_visits() as f64));
        ctx.update.push(vec![
            t.to_string(),
            n.to_string(),
            symbol_label(x),
            z.len().to_string(),
            r.steps.to_string(),
            r.max_visits().to_string(),
            m.num_states().to_string(),
            if ok { "match" } else { "mismatch" }.to_string(),
        ]);
    }
    let fv = fit_power(&visits);
    let (row, ok) = fit_row(7, "max_visits", "update-machine", &visits, fv, limits::UPDATE_VISIT_EXPONENT);
    ctx.fits.push(row);
    if !ok {
        fails.push(format!("visit fit {fv:?} exceeds exponent {}", limits::UPDATE_VISIT_EXPONENT));
    }
    verdict(
        7,
        "table calculus cross-validation",
        &fails,
        format!(
            "10000 triples bit-exact; 100 update machines bit-exact, visit fit d = {:.3}",
            fv.map_or(f64::NAN, |f| f.d)
        ),
    )
}

const LEMMA_HEADER: [&str; 13] = [
    "automaton",
    "n",
    "k",
    "base_states",
    "base_symbols",
    "wr_states",
    "wr_symbols",
    "wr_symbol_bound",
    "fold_c",
    "fold_states",
    "fold_symbols",
    "words",
    "disagreements",
];

/// Criterion 8: the two lemma passes applied to the visit-bounded sliding
/// machine of each corpus automaton.
fn lemma_passes(ctx: &mut Ctx, log: &mut dyn FnMut(&str)) -> CriterionResult {
    let mut fails = Vec::new();
    for (idx, (name, a)) in standard_corpus().into_iter().enumerate() {
        log(&format!("criterion 8: {name}"));
        let n = a.num_states();
        let sigma = a.alphabet().len() as u64;
        let b = match sliding_machine(&a, WindowKind::Wide) {
            Ok(b) => b,
            Err(e) => {
                fails.push(format!("{name}: build failed: {e}"));
                continue;
            }
        };
        let k = b.visit_bound;
        let base = Arc::new(Dtm::Table(b.machine));
        let wr = match wr_from_visit_bounded(base.clone(), k) {
            Ok(m) => Arc::new(m),
            Err(e) => {
                fails.push(format!("{name}: lemma-wr failed: {e}"));
                continue;
            }
        };
        let cc = (n + n * n) as u64;
        let h = match fold_to_hennie(wr.clone(), cc) {
            Ok(m) => m,
            Err(e) => {
                fails.push(format!("{name}: lemma-fold failed: {e}"));
                continue;
            }
        };
        let (gs, ws, hs) = (base.num_symbols(), wr.num_symbols(), h.num_symbols());
        let bound = k * gs + sigma + 2;
        if ws > bound {
            fails.push(format!("{name}: |G'| = {ws} > k|G|+|S|+2 = {bound}"));
        }
        if h.num_states() != 2 * wr.num_states() {
            fails.push(format!("{name}: fold has {} states, expected {}", h.num_states(), 2 * wr.num_states()));
        }
        if hs != ws + ws * ws {
            fails.push(format!("{name}: fold has {hs} symbols, expected {}", ws + ws * ws));
        }
        // Verdict preservation: every word up to length 6 for the countdown
        // (it is exact on all inputs), and 30 words of length C..=C+8 for
        // the fold.
        let auto = Automaton::TwoWay(a);
        let budget = RunOptions::with_budget(DEFAULT_BUDGET);
        let mut words: Vec<Vec<usize>> = (0..=6).flat_map(|l| super::gen::words_of_length(2, l)).collect();
        let short = words.len();
        let mut rng = ChaCha8Rng::seed_from_u64(800 + idx as u64);
        for _ in 0..30 {
            let l = rng.gen_range(cc as usize..=cc as usize + 8);
            words.push(random_word(&mut rng, 2, l));
        }
        let mut disagreements = 0;
        for (i, w) in words.iter().enumerate() {
            let want = auto.accepts(w).expect("corpus word");
            let verdict_of = |m: &Dtm, opts| run(m, w, opts).ok().and_then(|r| r.outcome.verdict());
            let mut got = vec![verdict_of(&base, budget), verdict_of(&wr, RunOptions::default())];
            if i >= short {
                got.push(verdict_of(&h, RunOptions::default()));
            }
            if got.iter().any(|&g| g != Some(want)) {
                disagreements += 1;
            }
        }
        if disagreements > 0 {
            fails.push(format!("{name}: {disagreements} verdicts changed"));
        }
        ctx.lemmas.push(vec![
            name.clone(),
            n.to_string(),
            k.to_string(),
            base.num_states().to_string(),
            gs.to_string(),
            wr.num_states().to_string(),
            ws.to_string(),
            bound.to_string(),
            cc.to_string(),
            h.num_states().to_string(),
            hs.to_string(),
            words.len().to_string(),
            disagreements.to_string(),
        ]);
    }
    verdict(
        8,
        "lemma passes",
        &fails,
        "20 machines: verdicts preserved, |G'| <= k|G|+|S|+2, fold doubles states and has |G|+|G|^2 symbols".into(),
    )
}

/// Criterion 9: size growth in n.
fn sizes(ctx: &mut Ctx, log: &mut dyn FnMut(&str)) -> CriterionResult {
    let mut fails = Vec::new();
    // Full transition relations: the largest machine for each n.
    let two = |n: usize| random_2nfa(&GeneratorSpec::new(n, 2, n as u64).with_density(1.0));
    let one = |n: usize| random_1nfa(&GeneratorSpec::new(n, 2, n as u64).with_density(1.0));
    type Build = Box<dyn Fn(usize) -> Result<Dtm, crate::constructions::ConstructionError>>;
    let plan: Vec<(Construction, std::ops::RangeInclusive<usize>, Build, Option<(f64, f64)>)> = vec![
        (
            Construction::TwoWayWrdtm,
            2..=5,
            Box::new(move |n| build_2nfa_to_wrdtm(&two(n))),
            Some((limits::WRDTM_METRIC_EXPONENT, limits::WRDTM_STATE_EXPONENT)),
        ),
        (
            Construction::TwoWayWrdhmLong,
            2..=5,
            Box::new(move |n| build_2nfa_to_wrdhm_long(&two(n))),
            Some((limits::WRDHM_LONG_METRIC_EXPONENT, f64::INFINITY)),
        ),
        (
            Construction::OneWayWrdhmLong,
            2..=6,
            Box::new(move |n| build_1nfa_to_wrdhm_long(&one(n))),
            Some((limits::ONE_WAY_METRIC_EXPONENT, f64::INFINITY)),
        ),
        (Construction::TwoWayDhm, 2..=5, Box::new(move |n| build_2nfa_to_dhm(&two(n))), None),
        (Construction::OneWayDhm, 2..=6, Box::new(move |n| build_1nfa_to_dhm(&one(n))), None),
    ];
    let mut summary = Vec::new();
    for (c, range, build, lim) in plan {
        log(&format!("criterion 9: {c}"));
        let (mut metric, mut states) = (Vec::new(), Vec::new());
        for n in range {
            let m = match build(n) {
                Ok(m) => m,
                Err(e) => {
                    fails.push(format!("{c} n={n}: build failed: {e}"));
                    continue;
                }
            };
            let s = m.size_report();
            ctx.sizes.push(vec![
                c.name().to_string(),
                n.to_string(),
                s.states.to_string(),
                s.work_symbols.to_string(),
                s.size_metric.to_string(),
            ]);
            metric.push((n as f64, s.size_metric as f64));
            states.push((n as f64, s.states as f64));
        }
        let Some((lm, ls)) = lim else { continue };
        let fm = fit_power(&metric);
        let (row, ok) = fit_row(9, "size_metric", c.name(), &metric, fm, lm);
        ctx.fits.push(row);
        if !ok {
            fails.push(format!("{c}: size_metric fit {fm:?} exceeds exponent {lm}"));
        }
        summary.push(format!("{c} d = {:.2}", fm.map_or(f64::NAN, |f| f.d)));
        if ls.is_finite() {
            let fs = fit_power(&states);
            let (row, ok) = fit_row(9, "states", c.name(), &states, fs, ls);
            ctx.fits.push(row);
            if !ok {
                fails.push(format!("{c}: state fit {fs:?} exceeds exponent {ls}"));
            }
            summary.push(format!("{c} states d = {:.2}", fs.map_or(f64::NAN, |f| f.d)));
        }
    }
    verdict(9, "size-metric scaling", &fails, summary.join(", "))
}

/// Runs criteria 1–9 and collects their CSV tables. `log` receives
/// progress lines.
pub fn run_standard_suite(log: &mut dyn FnMut(&str)) -> SuiteReport {
    let mut ctx = Ctx {
        equiv: Table::new(&EQUIV_HEADER),
        fits: Table::new(&FIT_HEADER),
        profiles: Table::new(&PROFILE_HEADER),
        lemmas: Table::new(&LEMMA_HEADER),
        update: Table::new(&["triple", "n", "symbol", "prefix_len", "steps", "max_visits", "states", "verdict"]),
        sizes: Table::new(&["construction", "n", "states", "symbols", "metric"]),
    };
    let mut criteria = Vec::new();
    criteria.extend(wrdtm_corpus(&mut ctx, log));
    criteria.push(long_inputs(&mut ctx, log));
    criteria.push(unary(&mut ctx, log));
    criteria.push(hennie(&mut ctx, log));
    criteria.push(one_way(&mut ctx, log));
    criteria.push(table_calculus(&mut ctx, log));
    criteria.push(lemma_passes(&mut ctx, log));
    criteria.push(sizes(&mut ctx, log));

    let mut summary = Table::new(&["criterion", "title", "verdict", "detail"]);
    for c in &criteria {
        summary.push(vec![
            c.id.to_string(),
            c.title.to_string(),
            if c.passed { "pass" } else { "fail" }.to_string(),
            c.detail.clone(),
        ]);
    }
    let files = vec![
        ("summary.csv".to_string(), summary.to_csv()),
        ("equivalence.csv".to_string(), ctx.equiv.to_csv()),
        ("profiles.csv".to_string(), ctx.profiles.to_csv()),
        ("update_machines.csv".to_string(), ctx.update.to_csv()),
        ("lemma_passes.csv".to_string(), ctx.lemmas.to_csv()),
        ("sizes.csv".to_string(), ctx.sizes.to_csv()),
        ("fits.csv".to_string(), ctx.fits.to_csv()),
    ];
    SuiteReport { criteria, files }
}

/// Writes the CSV tables of `report` into `dir` (created if missing).
pub fn write_suite(report: &SuiteReport, dir: &std::path::Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, text) in &report.files {
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_fixed() {
        let c = standard_corpus();
        assert_eq!(c.len(), 20);
        assert_eq!(c.iter().filter(|(_, a)| a.num_states() == 3).count(), 7);
        let again = standard_corpus();
        for ((n1, a1), (n2, a2)) in c.iter().zip(&again) {
            assert_eq!(n1, n2);
            assert_eq!(a1.transitions(), a2.transitions());
        }
        assert!(corpus_witnesses().iter().all(|(_, a)| a.num_states() <= 4));
    }

    #[test]
    fn tables_quote_fields() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x, y".into(), "1".into()]);
        assert_eq!(t.to_csv(), "a,b\n\"x, y\",1\n");
    }

    #[test]
    fn failure_lists_are_truncated() {
        let v: Vec<String> = (0..8).map(|i| i.to_string()).collect();
        assert_eq!(failures(&v), "0; 1; 2; 3; 4; … 3 more");
    }
}
