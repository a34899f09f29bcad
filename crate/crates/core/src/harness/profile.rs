//! Step and visit profiles over input length.

use super::equiv::DEFAULT_BUDGET;
use super::gen::random_word;
use crate::tm::{run, Dtm, MachineCore, MachineError, Outcome, RunOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Worst case over the sampled words of one length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub len: usize,
    pub samples: usize,
    pub max_steps: u64,
    pub max_visits: u64,
    pub left_extra: u64,
    pub right_extra: u64,
    /// Runs that exhausted their budget.
    pub inconclusive: usize,
}

/// Runs `m` on `per_length` random words of each length (one seeded stream
/// for the whole table).
pub fn profile_scaling(
    m: &Dtm,
    lengths: &[usize],
    per_length: usize,
    seed: u64,
    budget: Option<u64>,
) -> Result<Vec<ProfileRow>, MachineError> {
    let k = m.input().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups: Vec<Vec<Vec<usize>>> = lengths
        .iter()
        .map(|&len| (0..per_length).map(|_| random_word(&mut rng, k, len)).collect())
        .collect();
    profile_words(m, &groups, budget)
}

/// One row per group of words; a group's row is labelled with the length of
/// its first word.
pub fn profile_words(m: &Dtm, groups: &[Vec<Vec<usize>>], budget: Option<u64>) -> Result<Vec<ProfileRow>, MachineError> {
    let opts = match budget {
        Some(b) => RunOptions::with_budget(b),
        None if m.claims_weight_reducing() => RunOptions::default(),
        None => RunOptions::with_budget(DEFAULT_BUDGET),
    };
    let mut rows = Vec::new();
    for words in groups {
        let mut row = ProfileRow {
            len: words.first().map_or(0, Vec::len),
            samples: words.len(),
            max_steps: 0,
            max_visits: 0,
            left_extra: 0,
            right_extra: 0,
            inconclusive: 0,
        };
        for w in words {
            let r = run(m, w, opts)?;
            row.max_steps = row.max_steps.max(r.steps);
            row.max_visits = row.max_visits.max(r.max_visits());
            row.left_extra = row.left_extra.max(r.left_extra);
            row.right_extra = row.right_extra.max(r.right_extra);
            row.inconclusive += (r.outcome == Outcome::BudgetExhausted) as usize;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// CSV with a header row.
pub fn profile_csv(rows: &[ProfileRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["len", "samples", "max_steps", "max_visits", "left_extra", "right_extra", "inconclusive"])
        .unwrap();
    for r in rows {
        w.serialize((r.len, r.samples, r.max_steps, r.max_visits, r.left_extra, r.right_extra, r.inconclusive))
            .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::OneWayNfa;
    use crate::constructions::build_1nfa_to_wrdhm_long;

    fn sample_machine() -> Dtm {
        let a = OneWayNfa::with_states(2, vec!['a', 'b'], 0, &[1], [(0, 0, 0), (0, 1, 0), (0, 0, 1)]).unwrap();
        build_1nfa_to_wrdhm_long(&a).unwrap()
    }

    #[test]
    fn end_marked_profile_has_no_extra_cells_and_is_deterministic() {
        let m = sample_machine();
        let rows = profile_scaling(&m, &[8, 16, 32], 3, 5, None).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.left_extra == 0 && r.right_extra == 0 && r.inconclusive == 0));
        assert!(rows.windows(2).all(|p| p[0].max_steps < p[1].max_steps));
        assert_eq!(profile_csv(&rows), profile_csv(&profile_scaling(&m, &[8, 16, 32], 3, 5, None).unwrap()));
    }

    #[test]
    fn csv_has_header_and_one_line_per_length() {
        let rows = profile_scaling(&sample_machine(), &[4, 5], 1, 0, None).unwrap();
        let text = profile_csv(&rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("len,samples"));
        assert!(lines[1].starts_with("4,1,"));
    }
}
