//! Hennie machines equivalent to an automaton on every input, dispatching on
//! the input length.
//!
//! A read-only front sweeps right once. Short inputs are decided by walking
//! an acceptance trie, inputs of middle length return to ⊢ and run the
//! divide-and-conquer reachability machine built for exactly that length,
//! and long inputs return to ⊢ and run the long-input machine.

use super::one_way::build_1nfa_to_wrdhm_long;
use super::savitch::SavitchMachine;
use super::sliding::build_2nfa_to_wrdhm_long;
use super::staged::Staged;
use super::ConstructionError;
use crate::automata::{accepts_1nfa, short_string_classifier, OneWayNfa, TwoWayNfa};
use crate::tm::{input_sym, Action, Dtm, MachineCore, StateId, TableBuilder, LEFT_END, RIGHT_END};
use crate::Dir;
use std::collections::VecDeque;
use std::sync::Arc;

/// Regime boundaries: lengths `≤ short` are decided by the trie, lengths in
/// `short+1 .. long` by the per-length machines, lengths `≥ long` by the
/// long-input machine.
struct Census {
    trie: OneWayNfa,
    short: usize,
    long: usize,
}

/// Builds the front and wires it to `mid` (one machine per middle length,
/// starting on ⊢ in its initial state) and `long_m` (entered on cell 1 in
/// the state it reaches after bouncing off ⊢).
fn assemble(
    input: &[char],
    c: &Census,
    mid: Vec<SavitchMachine>,
    long_m: Dtm,
) -> Result<Staged, ConstructionError> {
    let k = input.len();
    assert!(c.short < c.long && mid.len() == c.long - c.short - 1);
    let mut b = TableBuilder::new(input, Vec::new(), true);

    // Trie nodes by level order, with their depth; the sink is never entered.
    let sink = c.trie.num_states() - 1;
    let mut depth = vec![usize::MAX; c.trie.num_states()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([c.trie.initial()]);
    depth[c.trie.initial()] = 0;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        if depth[v] == c.short {
            continue;
        }
        for x in 0..k {
            for &u in c.trie.delta(v, x) {
                if u != sink && depth[u] == usize::MAX {
                    depth[u] = depth[v] + 1;
                    queue.push_back(u);
                }
            }
        }
    }

    let init = b.add_state("init", false);
    let mut node = vec![0; c.trie.num_states()];
    for &v in &order {
        node[v] = b.add_state(format!("trie:{}", c.trie.state_name(v)), c.trie.is_final(v));
    }
    let mids: Vec<usize> = (c.short + 1..c.long).collect();
    let count: Vec<StateId> = mids.iter().map(|i| b.add_state(format!("count{i}"), false)).collect();
    let ret_mid: Vec<StateId> = mids.iter().map(|i| b.add_state(format!("back{i}"), false)).collect();
    let bounce: Vec<StateId> = mids.iter().map(|i| b.add_state(format!("bounce{i}"), false)).collect();
    let exit_mid: Vec<StateId> = mids.iter().map(|i| b.add_state(format!("run{i}"), false)).collect();
    let ret_long = b.add_state("back-long", false);
    let exit_long = b.add_state("run-long", false);
    b.initial = init as u32;

    // Action after having read `i` letters, the head on the next letter.
    let after = |i: usize, x| {
        if i >= c.long {
            Action::new(ret_long, x, Dir::L)
        } else {
            Action::new(count[i - c.short - 1], x, Dir::R)
        }
    };

    b.set(init, LEFT_END, Action::new(node[c.trie.initial()], LEFT_END, Dir::R));
    for &v in &order {
        // Reading ⊣ halts: the node's finality is the verdict.
        for x in 0..k {
            let s = input_sym(x);
            let act = if depth[v] < c.short {
                Action::new(node[c.trie.delta(v, x)[0]], s, Dir::R)
            } else {
                after(c.short + 1, s)
            };
            b.set(node[v], s, act);
        }
    }
    for (t, &i) in mids.iter().enumerate() {
        for x in 0..k {
            let s = input_sym(x);
            b.set(count[t], s, after(i + 1, s));
            b.set(ret_mid[t], s, Action::new(ret_mid[t], s, Dir::L));
            b.set(bounce[t], s, Action::new(exit_mid[t], s, Dir::L));
        }
        b.set(count[t], RIGHT_END, Action::new(ret_mid[t], RIGHT_END, Dir::L));
        b.set(ret_mid[t], LEFT_END, Action::new(bounce[t], LEFT_END, Dir::R));
    }
    for x in 0..k {
        let s = input_sym(x);
        b.set(ret_long, s, Action::new(ret_long, s, Dir::L));
    }
    b.set(ret_long, LEFT_END, Action::new(exit_long, LEFT_END, Dir::R));
    let front = b.build()?;

    let after_bounce = long_m
        .delta(long_m.initial(), LEFT_END)
        .expect("the long machine bounces off ⊢")
        .next;
    let mut exits: Vec<(StateId, usize, StateId)> = mid
        .iter()
        .enumerate()
        .map(|(t, m)| (exit_mid[t], t, m.initial()))
        .collect();
    exits.push((exit_long, mid.len(), after_bounce));
    let mut subs: Vec<Arc<Dtm>> = mid.into_iter().map(|m| Arc::new(Dtm::Savitch(m))).collect();
    subs.push(Arc::new(long_m));
    Staged::new(front, subs, &exits, Vec::new()).map_err(ConstructionError::Domain)
}

/// End-marked Hennie machine equivalent to the two-way automaton `a` on
/// every input. Not weight-reducing: the middle-length machines rewrite
/// their stack cells arbitrarily often.
pub fn build_2nfa_to_dhm(a: &TwoWayNfa) -> Result<Dtm, ConstructionError> {
    let n = a.num_states();
    let short = n.ilog2() as usize;
    let long = (n * n).max(short + 1);
    let normal = Arc::new(a.single_final());
    let mid = (short + 1..long)
        .map(|m| SavitchMachine::two_way(normal.clone(), m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(ConstructionError::Domain)?;
    let census = Census {
        trie: short_string_classifier(a, short),
        short,
        long,
    };
    let long_m = build_2nfa_to_wrdhm_long(a)?;
    Ok(Dtm::Staged(assemble(a.alphabet(), &census, mid, long_m)?))
}

/// End-marked Hennie machine equivalent to the one-way automaton `a` on
/// every input: ε is decided by the front, lengths `1..=n` by the
/// divide-and-conquer machines and longer inputs by the powerset machine.
pub fn build_1nfa_to_dhm(a: &OneWayNfa) -> Result<Dtm, ConstructionError> {
    let n = a.num_states();
    let eps = accepts_1nfa(a, &[])?;
    // A one-node trie with a sink; only its root is used.
    let k = a.alphabet().len();
    let trie = OneWayNfa::new(
        vec!["eps".into(), "sink".into()],
        a.alphabet().to_vec(),
        0,
        if eps { &[0][..] } else { &[][..] },
        (0..k).flat_map(|x| [(0, x, 1), (1, x, 1)]),
    )?;
    let normal = Arc::new(a.single_final());
    let mid = (1..=n)
        .map(|m| SavitchMachine::one_way(normal.clone(), m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(ConstructionError::Domain)?;
    let census = Census { trie, short: 0, long: n + 1 };
    let long_m = build_1nfa_to_wrdhm_long(a)?;
    Ok(Dtm::Staged(assemble(a.alphabet(), &census, mid, long_m)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::accepts_2nfa;
    use crate::harness::{random_1nfa, random_2nfa, words_of_length, GeneratorSpec};
    use crate::tm::{check_end_marked, run, RunOptions};

    #[test]
    fn two_way_all_regimes() {
        for seed in 0..3 {
            let a = random_2nfa(&GeneratorSpec::new(2, 2, seed).with_density(0.35));
            let m = build_2nfa_to_dhm(&a).unwrap();
            check_end_marked(&m).unwrap();
            for len in 0..=6 {
                for w in words_of_length(2, len) {
                    let r = run(&m, &w, RunOptions::with_budget(1 << 36)).unwrap();
                    assert_eq!(r.accepted(), accepts_2nfa(&a, &w).unwrap(), "seed {seed} w {w:?}");
                    assert_eq!(r.left_extra + r.right_extra, 0);
                }
            }
        }
    }

    #[test]
    fn one_way_all_regimes() {
        for seed in 0..4 {
            let a = random_1nfa(&GeneratorSpec::new(3, 2, seed).with_density(0.4));
            let m = build_1nfa_to_dhm(&a).unwrap();
            check_end_marked(&m).unwrap();
            for len in 0..=6 {
                for w in words_of_length(2, len) {
                    let r = run(&m, &w, RunOptions::with_budget(1 << 36)).unwrap();
                    assert_eq!(r.accepted(), accepts_1nfa(&a, &w).unwrap(), "seed {seed} w {w:?}");
                }
            }
        }
    }
}
