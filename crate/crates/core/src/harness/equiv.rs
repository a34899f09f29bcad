//! Machine-versus-automaton agreement checks.

use super::gen::{random_word, words_of_length};
use crate::automata::decode_word;
use crate::constructions::{Automaton, Guarantee};
use crate::tm::{run, Dtm, MachineCore, Outcome, RunOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Exhaustive testing is refused above this many words; the check falls
/// back to random sampling.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 18;

/// Per-run budget for machines without a weight-reducing guarantee.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivMode {
    Exhaustive,
    /// `count` words, lengths uniform in `min_len..=max_len`, letters
    /// uniform.
    Random { count: usize, max_len: usize, seed: u64 },
}

/// What was checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivPlan {
    pub min_len: usize,
    pub max_len: usize,
    pub mode: EquivMode,
    /// Step budget per run; `None` uses the simulator default for
    /// weight-reducing machines and [`DEFAULT_BUDGET`] otherwise.
    pub budget: Option<u64>,
}

impl EquivPlan {
    pub fn exhaustive(min_len: usize, max_len: usize) -> Self {
        EquivPlan { min_len, max_len, mode: EquivMode::Exhaustive, budget: None }
    }

    pub fn random(min_len: usize, max_len: usize, count: usize, seed: u64) -> Self {
        EquivPlan { min_len, max_len, mode: EquivMode::Random { count, max_len, seed }, budget: None }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub word: String,
    pub expected: bool,
    pub got: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivReport {
    pub min_len: usize,
    pub max_len: usize,
    pub exhaustive: bool,
    pub tested: u64,
    /// Disagreements inside the construction's guarantee.
    pub mismatches: Vec<Mismatch>,
    /// Disagreements the construction does not promise to avoid.
    pub outside_guarantee: Vec<Mismatch>,
    /// Words on which the machine exhausted its budget.
    pub inconclusive: Vec<String>,
    /// Runs stopped by the divergence detector (counted as rejections).
    pub diverged: u64,
    pub total_steps: u64,
    pub max_steps: u64,
    pub max_visits: u64,
    pub max_left_extra: u64,
    pub max_right_extra: u64,
}

impl EquivReport {
    /// No in-guarantee mismatch and no inconclusive run.
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.inconclusive.is_empty()
    }

    /// Agreement on every word of the range.
    pub fn certified(&self) -> bool {
        self.passed() && self.exhaustive
    }

    pub fn verdict(&self) -> &'static str {
        if !self.mismatches.is_empty() {
            "mismatch"
        } else if !self.inconclusive.is_empty() {
            "inconclusive"
        } else if self.exhaustive {
            "certified"
        } else {
            "agree"
        }
    }

    pub fn merge(&mut self, o: EquivReport) {
        self.min_len = self.min_len.min(o.min_len);
        self.max_len = self.max_len.max(o.max_len);
        self.exhaustive &= o.exhaustive;
        self.tested += o.tested;
        self.mismatches.extend(o.mismatches);
        self.outside_guarantee.extend(o.outside_guarantee);
        self.inconclusive.extend(o.inconclusive);
        self.diverged += o.diverged;
        self.total_steps += o.total_steps;
        self.max_steps = self.max_steps.max(o.max_steps);
        self.max_visits = self.max_visits.max(o.max_visits);
        self.max_left_extra = self.max_left_extra.max(o.max_left_extra);
        self.max_right_extra = self.max_right_extra.max(o.max_right_extra);
    }
}

impl fmt::Display for EquivReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "range {}..={} ({}), {} words: {}",
            self.min_len,
            self.max_len,
            if self.exhaustive { "exhaustive" } else { "random" },
            self.tested,
            self.verdict()
        )?;
        writeln!(
            f,
            "steps max {} total {}, max visits {}, extra cells left {} right {}, diverged {}",
            self.max_steps, self.total_steps, self.max_visits, self.max_left_extra, self.max_right_extra, self.diverged
        )?;
        let show = |w: &str| if w.is_empty() { "ε".to_string() } else { w.to_string() };
        for m in &self.mismatches {
            writeln!(f, "mismatch {}: automaton {} machine {}", show(&m.word), m.expected, m.got)?;
        }
        for m in &self.outside_guarantee {
            writeln!(f, "outside guarantee {}: automaton {} machine {}", show(&m.word), m.expected, m.got)?;
        }
        for w in &self.inconclusive {
            writeln!(f, "inconclusive {}", show(w))?;
        }
        Ok(())
    }
}

fn total_words(k: usize, min_len: usize, max_len: usize) -> u64 {
    (min_len..=max_len)
        .map(|l| (k as u64).checked_pow(l as u32).unwrap_or(u64::MAX))
        .fold(0u64, |a, b| a.saturating_add(b))
}

/// The words a plan covers, in ascending length then lexicographic order.
pub fn plan_words(k: usize, plan: &EquivPlan) -> (Vec<Vec<usize>>, bool) {
    let forced_random = total_words(k, plan.min_len, plan.max_len) > EXHAUSTIVE_LIMIT;
    match &plan.mode {
        EquivMode::Exhaustive if !forced_random => {
            ((plan.min_len..=plan.max_len).flat_map(|l| words_of_length(k, l)).collect(), true)
        }
        mode => {
            let (count, max_len, seed) = match mode {
                EquivMode::Random { count, max_len, seed } => (*count, *max_len, *seed),
                EquivMode::Exhaustive => (1000, plan.max_len, 0),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v: Vec<Vec<usize>> = (0..count)
                .map(|_| {
                    let len = rng.gen_range(plan.min_len..=max_len.max(plan.min_len));
                    random_word(&mut rng, k, len)
                })
                .collect();
            v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            (v, false)
        }
    }
}

/// Compares the machine with the automaton's oracle on the words of `plan`.
pub fn equiv_check(a: &Automaton, m: &Dtm, plan: &EquivPlan, guarantee: Guarantee) -> EquivReport {
    let k = a.alphabet().len();
    let (words, exhaustive) = plan_words(k, plan);
    let max_len = match plan.mode {
        EquivMode::Random { max_len, .. } => max_len.max(plan.min_len),
        EquivMode::Exhaustive => plan.max_len,
    };
    let mut rep = EquivReport { min_len: plan.min_len, max_len, exhaustive, ..Default::default() };
    let opts = match plan.budget {
        Some(b) => RunOptions::with_budget(b),
        None if m.claims_weight_reducing() => RunOptions::default(),
        None => RunOptions::with_budget(DEFAULT_BUDGET),
    };
    for w in words {
        let expected = a.accepts(&w).expect("words are over the alphabet");
        let text = decode_word(m.input(), &w);
        rep.tested += 1;
        let r = match run(m, &w, opts) {
            Ok(r) => r,
            Err(_) => {
                rep.inconclusive.push(text);
                continue;
            }
        };
        rep.total_steps += r.steps;
        rep.max_steps = rep.max_steps.max(r.steps);
        rep.max_visits = rep.max_visits.max(r.max_visits());
        rep.max_left_extra = rep.max_left_extra.max(r.left_extra);
        rep.max_right_extra = rep.max_right_extra.max(r.right_extra);
        rep.diverged += (r.outcome == Outcome::DivergedDetected) as u64;
        let Some(got) = r.outcome.verdict() else {
            rep.inconclusive.push(text);
            continue;
        };
        if got != expected {
            let mm = Mismatch { word: text, expected, got };
            if guarantee.covers(w.len()) {
                rep.mismatches.push(mm);
            } else {
                rep.outside_guarantee.push(mm);
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::{TableBuilder, LEFT_END};
    use crate::Dir;

    fn always_reject() -> Dtm {
        let mut b = TableBuilder::new(&['a'], vec![], true);
        let q = b.add_state("q", false);
        let h = b.add_state("h", false);
        b.set(q, LEFT_END, crate::tm::Action::new(h, LEFT_END, Dir::R));
        Dtm::Table(b.build().unwrap())
    }

    #[test]
    fn reject_machine_against_epsilon_acceptor() {
        let a = crate::harness::families::unary_divisibility(&[2]);
        let r = equiv_check(&Automaton::TwoWay(a), &always_reject(), &EquivPlan::exhaustive(0, 3), Guarantee::All);
        assert_eq!(r.mismatches[0].word, "");
        assert_eq!(r.mismatches.len(), 2);
        assert!(!r.passed());
    }

    #[test]
    fn outside_guarantee_is_separate() {
        let a = crate::harness::families::unary_divisibility(&[1]);
        let r = equiv_check(&Automaton::TwoWay(a), &always_reject(), &EquivPlan::exhaustive(0, 4), Guarantee::AtLeast(3));
        assert_eq!(r.mismatches.len(), 2);
        assert_eq!(r.outside_guarantee.len(), 3);
    }

    #[test]
    fn large_exhaustive_plans_fall_back_to_random() {
        let (w, ex) = plan_words(2, &EquivPlan::exhaustive(0, 30));
        assert!(!ex);
        assert_eq!(w.len(), 1000);
        assert!(w.windows(2).all(|p| p[0].len() <= p[1].len()));
    }
}
