//! Unary two-way automata: a counting front for short inputs in front of
//! the long-input machine.

use super::sliding::build_2nfa_to_wrdhm_long;
use super::staged::Staged;
use super::ConstructionError;
use crate::automata::{accepts_2nfa, AutomatonError, TwoWayNfa};
use crate::tm::{input_sym, Action, Dtm, MachineCore, TableBuilder, LEFT_END};
use crate::Dir;
use std::sync::Arc;

/// End-marked weight-reducing Hennie machine equivalent to the unary
/// automaton `a` on every input.
///
/// The front sweeps right marking each `a` and counting up to n². Inputs
/// shorter than n² are decided from the precomputed set of accepted
/// lengths. Otherwise the front turns back, re-marking the counted cells,
/// and leaves ⊢ in the long-input machine's initial configuration.
pub fn build_unary_2nfa_to_wrdhm(a: &TwoWayNfa) -> Result<Dtm, ConstructionError> {
    if a.alphabet().len() != 1 {
        return Err(AutomatonError::NotUnary(a.alphabet().len()).into());
    }
    let n = a.num_states();
    let big = n * n;
    let long = Arc::new(build_2nfa_to_wrdhm_long(a)?);

    let letter = input_sym(0);
    let mut b = TableBuilder::new(a.alphabet(), vec!["a1".into(), "a2".into()], true);
    let (a1, a2) = (letter + 1, letter + 2);
    // Ranks: blank and endmarkers 0, then a2 < a1 < a.
    let mut rank = vec![0; b.num_symbols()];
    rank[letter as usize] = 2;
    rank[a1 as usize] = 1;
    b.rank = Some(rank);

    let init = b.add_state("init", false);
    let counted: Vec<_> = (0..big)
        .map(|i| {
            let w = vec![0; i];
            b.add_state(format!("c{i}"), accepts_2nfa(a, &w).expect("unary word"))
        })
        .collect();
    let ret = b.add_state("ret", false);
    let exit = b.add_state("exit", false);
    b.initial = init as u32;
    b.set(init, LEFT_END, Action::new(counted[0], LEFT_END, Dir::R));
    for i in 0..big {
        let next = if i + 1 < big {
            Action::new(counted[i + 1], a1, Dir::R)
        } else {
            Action::new(ret, a1, Dir::L)
        };
        // Reading ⊣ in c_i halts; the state is final iff length i is accepted.
        b.set(counted[i], letter, next);
    }
    b.set(ret, a1, Action::new(ret, a2, Dir::L));
    b.set(ret, LEFT_END, Action::new(exit, LEFT_END, Dir::R));
    let front = b.build()?;

    // The long machine scans cell 1 in its initial state's upper-track copy
    // right after bouncing off ⊢.
    let after_bounce = long
        .delta(long.initial(), LEFT_END)
        .expect("the long machine bounces off ⊢")
        .next;
    let staged = Staged::new(
        front,
        vec![long],
        &[(exit, 0, after_bounce)],
        vec![Some(letter), Some(letter)],
    )
    .map_err(ConstructionError::Domain)?;
    Ok(Dtm::Staged(staged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{random_unary_2nfa, GeneratorSpec};
    use crate::tm::{check_end_marked, run, verify_structure, RunOptions};

    #[test]
    fn agrees_on_all_lengths() {
        for seed in 0..4 {
            let a = random_unary_2nfa(&GeneratorSpec::unary(2, seed).with_density(0.4));
            let m = build_unary_2nfa_to_wrdhm(&a).unwrap();
            verify_structure(&m).unwrap();
            check_end_marked(&m).unwrap();
            for i in 0..=12 {
                let w = vec![0; i];
                let r = run(&m, &w, RunOptions::default()).unwrap();
                assert_eq!(r.accepted(), accepts_2nfa(&a, &w).unwrap(), "seed {seed} len {i}");
            }
        }
    }

    #[test]
    fn binary_alphabet_is_rejected() {
        let a = crate::harness::random_2nfa(&GeneratorSpec::new(2, 2, 0));
        assert!(build_unary_2nfa_to_wrdhm(&a).is_err());
    }
}
