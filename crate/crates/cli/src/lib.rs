//! The `hennie` command line: conversions, runs, checks, equivalence tests
//! and the standard report.
//!
//! Exit codes: 0 when the command succeeds or the property holds, 1 when the
//! property fails (rejection, mismatch, violated check), 2 for usage and
//! domain errors.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hennie::automata::{decode_word, encode_word};
use hennie::constructions::{apply_pass, build, Construction, Guarantee};
use hennie::format::{parse_automaton, parse_machine, print_machine};
use hennie::harness::{equiv_check, run_standard_suite, write_suite, EquivPlan};
use hennie::tm::{
    check_end_marked, check_halting_on, check_weight_reducing, run, Dtm, HaltingReport, MachineCore, RankSource,
    RunOptions, WrWitness,
};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "hennie", version, about = "Two-way automata to weight-reducing and Hennie machines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a machine from an automaton (or apply a lemma pass to a
    /// machine) and write it as a machine file.
    Convert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        construction: String,
        #[arg(long)]
        out: PathBuf,
        /// For 2nfa-wrdtm: stop before the weight-reducing pass.
        #[arg(long)]
        skip_wr_pass: bool,
        /// Visit bound (lemma-wr) or overhang bound (lemma-fold).
        #[arg(long)]
        param: Option<u64>,
        /// Refuse to tabulate more than this many (state, symbol) entries.
        #[arg(long, default_value_t = 1 << 24)]
        max_entries: u64,
    },
    /// Run a machine on one input.
    Run {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        #[arg(long)]
        budget: Option<u64>,
        /// Write per-cell visit counts here.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Check a static or dynamic property of a machine.
    Check {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        /// Inputs for `halting-on` (use "" for the empty word).
        #[arg(long, num_args = 0..)]
        inputs: Vec<String>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Compare a machine with an automaton on a range of input lengths.
    Equiv {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        min_len: usize,
        #[arg(long)]
        max_len: usize,
        /// Additional random words.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long)]
        max_random_len: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u64>,
        /// Mismatches on shorter inputs are reported as outside the
        /// guarantee.
        #[arg(long)]
        guarantee_min_len: Option<usize>,
    },
    /// Run a measurement suite and write its CSV tables.
    Report {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        out: PathBuf,
        /// Print progress to stderr.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Wr,
    Endmarked,
    HaltingOn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Standard,
}

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Failure,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Failure => 1,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Success
        } else {
            Status::Failure
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_machine(path: &Path) -> Result<Dtm> {
    let m = parse_machine(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Dtm::Table(m))
}

fn word(m: &Dtm, s: &str) -> Result<Vec<usize>> {
    encode_word(m.input(), s).map_err(|e| anyhow!("input `{s}`: {e}"))
}

fn symbol_list(m: &Dtm, syms: &[u64]) -> String {
    syms.iter().map(|&s| m.symbol_name(s)).collect::<Vec<_>>().join(" -> ")
}

/// Runs one command. Errors are usage or domain errors (exit code 2).
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<Status> {
    match cli.command {
        Command::Convert { input, construction, out: path, skip_wr_pass, param, max_entries } => {
            let c: Construction = construction.parse()?;
            let text = read(&input)?;
            let m = if c.is_pass() {
                let base = parse_machine(&text).with_context(|| format!("parsing {}", input.display()))?;
                let param = param.ok_or_else(|| anyhow!("{c} needs --param"))?;
                apply_pass(c, Dtm::Table(base), param)?
            } else {
                if param.is_some() {
                    bail!("--param only applies to lemma passes");
                }
                let a = parse_automaton(&text).with_context(|| format!("parsing {}", input.display()))?;
                build(c, &a, skip_wr_pass)?
            };
            let s = m.size_report();
            writeln!(
                out,
                "states {} work_symbols {} transitions {} size_metric {}",
                s.states, s.work_symbols, s.transitions, s.size_metric
            )?;
            let table = m
                .materialize(max_entries)
                .with_context(|| "the machine is too large to write; raise --max-entries")?;
            std::fs::write(&path, print_machine(&table)?).with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "wrote {} ({} reachable states)", path.display(), table.num_states())?;
            Ok(Status::Success)
        }
        Command::Run { machine, input, budget, profile } => {
            let m = load_machine(&machine)?;
            let w = word(&m, &input)?;
            let opts = match budget {
                Some(b) => RunOptions::with_budget(b),
                None => RunOptions::default(),
            };
            let r = run(&m, &w, opts)?;
            writeln!(out, "outcome {}", r.outcome.as_str())?;
            writeln!(out, "steps {}", r.steps)?;
            writeln!(out, "left_extra {}", r.left_extra)?;
            writeln!(out, "right_extra {}", r.right_extra)?;
            writeln!(out, "max_visits {}", r.max_visits())?;
            if let Some(p) = profile {
                std::fs::write(&p, r.visits.to_csv()).with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(Status::from_bool(r.accepted()))
        }
        Command::Check { machine, property, inputs, budget } => {
            let m = load_machine(&machine)?;
            match property {
                Property::Wr => match check_weight_reducing(&m) {
                    WrWitness::Valid { ranks, max_rank } => {
                        writeln!(out, "weight-reducing (max rank {max_rank})")?;
                        if let RankSource::Explicit(r) = ranks {
                            const SHOWN: usize = 32;
                            let pairs: Vec<String> = r
                                .iter()
                                .enumerate()
                                .take(SHOWN)
                                .map(|(s, v)| format!("{}={v}", m.symbol_name(s as u64)))
                                .collect();
                            let more = r.len().saturating_sub(SHOWN);
                            let tail = if more > 0 { format!(" ... ({more} more)") } else { String::new() };
                            writeln!(out, "rank: {}{tail}", pairs.join(" "))?;
                        }
                        Ok(Status::Success)
                    }
                    WrWitness::Cycle(c) => {
                        let mut cyc = c.clone();
                        cyc.push(c[0]);
                        writeln!(out, "not weight-reducing: rewrite cycle {}", symbol_list(&m, &cyc))?;
                        Ok(Status::Failure)
                    }
                    WrWitness::Violation(v) => {
                        writeln!(out, "not weight-reducing: {v}")?;
                        Ok(Status::Failure)
                    }
                },
                Property::Endmarked => match check_end_marked(&m) {
                    Ok(()) => {
                        writeln!(out, "end-marked")?;
                        Ok(Status::Success)
                    }
                    Err(v) => {
                        writeln!(out, "not end-marked: {v}")?;
                        Ok(Status::Failure)
                    }
                },
                Property::HaltingOn => {
                    if inputs.is_empty() {
                        bail!("halting-on needs --inputs");
                    }
                    let ws = inputs.iter().map(|s| word(&m, s)).collect::<Result<Vec<_>>>()?;
                    let budget = budget.or_else(|| (!m.claims_weight_reducing()).then_some(hennie::harness::DEFAULT_BUDGET));
                    match check_halting_on(&m, &ws, budget)? {
                        HaltingReport::AllHalt => {
                            writeln!(out, "halts on all {} inputs", ws.len())?;
                            Ok(Status::Success)
                        }
                        HaltingReport::NotHalting { input, outcome } => {
                            writeln!(
                                out,
                                "does not halt on `{}`: {}",
                                decode_word(m.input(), &input),
                                outcome.as_str()
                            )?;
                            Ok(Status::Failure)
                        }
                    }
                }
            }
        }
        Command::Equiv {
            automaton,
            machine,
            min_len,
            max_len,
            random,
            max_random_len,
            seed,
            budget,
            guarantee_min_len,
        } => {
            if min_len > max_len {
                bail!("--min-len exceeds --max-len");
            }
            let a = parse_automaton(&read(&automaton)?).with_context(|| format!("parsing {}", automaton.display()))?;
            let m = load_machine(&machine)?;
            if a.alphabet() != m.input() {
                bail!("automaton alphabet {:?} differs from machine input {:?}", a.alphabet(), m.input());
            }
            let g = guarantee_min_len.map_or(Guarantee::All, Guarantee::AtLeast);
            let with_budget = |p: EquivPlan| match budget {
                Some(b) => p.with_budget(b),
                None => p,
            };
            let ex = equiv_check(&a, &m, &with_budget(EquivPlan::exhaustive(min_len, max_len)), g);
            write!(out, "{ex}")?;
            let mut ok = ex.passed();
            if let Some(count) = random {
                let hi = max_random_len.unwrap_or(max_len);
                if hi < min_len {
                    bail!("--max-random-len is below --min-len");
                }
                let rnd = equiv_check(&a, &m, &with_budget(EquivPlan::random(min_len, hi, count, seed)), g);
                write!(out, "{rnd}")?;
                ok &= rnd.passed();
            }
            Ok(Status::from_bool(ok))
        }
        Command::Report { suite: Suite::Standard, out: dir, verbose } => {
            let mut log = |s: &str| {
                if verbose {
                    eprintln!("{s}");
                }
            };
            let r = run_standard_suite(&mut log);
            write_suite(&r, &dir).with_context(|| format!("writing {}", dir.display()))?;
            for c in &r.criteria {
                writeln!(out, "criterion {} {}: {} ({})", c.id, if c.passed { "pass" } else { "fail" }, c.title, c.detail)?;
            }
            writeln!(out, "wrote {} files to {}", r.files.len(), dir.display())?;
            Ok(Status::from_bool(r.passed()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_check_inputs_including_the_empty_word() {
        let cli = Cli::try_parse_from([
            "hennie", "check", "--machine", "m", "--property", "halting-on", "--inputs", "", "ab",
        ])
        .unwrap();
        match cli.command {
            Command::Check { property: Property::HaltingOn, inputs, .. } => assert_eq!(inputs, ["", "ab"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_suite_name_is_a_usage_error() {
        let e = Cli::try_parse_from(["hennie", "report", "--suite", "", "--out", "d"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn unknown_construction_is_a_domain_error() {
        let dir = std::env::temp_dir();
        let cli = Cli::try_parse_from([
            "hennie",
            "convert",
            "--in",
            "nope",
            "--construction",
            "no-such",
            "--out",
            dir.join("x").to_str().unwrap(),
        ])
        .unwrap();
        assert!(execute(cli, &mut Vec::new()).is_err());
    }
}
