//! Brute-force acceptance oracles and the computation graph of a 2NFA.

use super::nfa::{AutomatonError, OneWayNfa, TapeSymbol, TwoWayNfa};
use super::tables::ReachTables;
use crate::Dir;
use std::collections::VecDeque;

fn check_word(alphabet_len: usize, w: &[usize]) -> Result<(), AutomatonError> {
    match w.iter().find(|&&a| a >= alphabet_len) {
        Some(&a) => Err(AutomatonError::SymbolIndex(a)),
        None => Ok(()),
    }
}

/// The tape ⊢w⊣ as a sequence of tape symbols.
pub fn end_marked_tape(w: &[usize]) -> Vec<TapeSymbol> {
    let mut t = Vec::with_capacity(w.len() + 2);
    t.push(TapeSymbol::LeftEnd);
    t.extend(w.iter().map(|&a| TapeSymbol::Input(a)));
    t.push(TapeSymbol::RightEnd);
    t
}

/// A vertex of the computation graph on ⊢w⊣: a state and a cell index in
/// `0..=m+1`, or `m+2` for "has left the tape to the right".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigNode {
    pub state: usize,
    pub position: usize,
}

/// Successors of a vertex in the computation graph of `a` on ⊢w⊣.
pub fn successors(a: &TwoWayNfa, tape: &[TapeSymbol], node: ConfigNode) -> Vec<ConfigNode> {
    if node.position >= tape.len() {
        return Vec::new();
    }
    a.delta(node.state, tape[node.position])
        .iter()
        .filter_map(|&(q, d)| {
            let pos = node.position as i64 + d.delta();
            (pos >= 0).then_some(ConfigNode {
                state: q,
                position: pos as usize,
            })
        })
        .collect()
}

/// Whether `(q, j)` is an edge target from `(p, i)` in the computation graph.
pub fn is_edge(a: &TwoWayNfa, tape: &[TapeSymbol], from: ConfigNode, to: ConfigNode) -> bool {
    if from.position >= tape.len() {
        return false;
    }
    let d = match to.position as i64 - from.position as i64 {
        1 => Dir::R,
        -1 => Dir::L,
        _ => return false,
    };
    a.has_move(from.state, tape[from.position], to.state, d)
}

/// Ground-truth acceptance of a 2NFA by breadth-first search over the
/// configuration graph.
pub fn accepts_2nfa(a: &TwoWayNfa, w: &[usize]) -> Result<bool, AutomatonError> {
    check_word(a.alphabet().len(), w)?;
    let tape = end_marked_tape(w);
    let len = tape.len();
    let n = a.num_states();
    let mut seen = vec![false; n * len];
    let mut queue = VecDeque::new();
    seen[a.initial() * len] = true;
    queue.push_back((a.initial(), 0usize));
    while let Some((p, i)) = queue.pop_front() {
        for &(q, d) in a.delta(p, tape[i]) {
            match d {
                Dir::R if i + 1 == len => {
                    if a.is_final(q) {
                        return Ok(true);
                    }
                }
                Dir::L if i == 0 => {}
                _ => {
                    let j = (i as i64 + d.delta()) as usize;
                    if !seen[q * len + j] {
                        seen[q * len + j] = true;
                        queue.push_back((q, j));
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Standard subset simulation of a 1NFA.
pub fn accepts_1nfa(a: &OneWayNfa, w: &[usize]) -> Result<bool, AutomatonError> {
    check_word(a.alphabet().len(), w)?;
    let n = a.num_states();
    let mut cur = vec![false; n];
    cur[a.initial()] = true;
    for &x in w {
        let mut next = vec![false; n];
        for p in (0..n).filter(|&p| cur[p]) {
            for &q in a.delta(p, x) {
                next[q] = true;
            }
        }
        cur = next;
    }
    Ok((0..n).any(|q| cur[q] && a.is_final(q)))
}

/// States reachable on the right of `segment` when starting inside it at
/// `start` (which must be a valid index), without ever leaving the segment
/// to the left.
fn exits_right(a: &TwoWayNfa, segment: &[TapeSymbol], start: usize, state: usize) -> u64 {
    let len = segment.len();
    let n = a.num_states();
    let mut seen = vec![false; n * len];
    let mut out = 0u64;
    let mut stack = vec![(state, start)];
    seen[state * len + start] = true;
    while let Some((p, i)) = stack.pop() {
        for &(q, d) in a.delta(p, segment[i]) {
            match d {
                Dir::R if i + 1 == len => out |= 1 << q,
                Dir::L if i == 0 => {}
                _ => {
                    let j = (i as i64 + d.delta()) as usize;
                    if !seen[q * len + j] {
                        seen[q * len + j] = true;
                        stack.push((q, j));
                    }
                }
            }
        }
    }
    out
}

/// The tables (γ_{zX}, τ_{zX}) straight from their definitions, by search
/// restricted to the segment `zx`.
pub fn gamma_tau_oracle(a: &TwoWayNfa, zx: &[TapeSymbol]) -> Result<ReachTables, AutomatonError> {
    let n = a.num_states();
    if n > super::nfa::MAX_TABLE_STATES {
        return Err(AutomatonError::TooManyStates(n));
    }
    if zx.first() != Some(&TapeSymbol::LeftEnd) {
        return Err(AutomatonError::PrefixWithoutLeftEnd);
    }
    for (i, &x) in zx.iter().enumerate() {
        match x {
            TapeSymbol::LeftEnd if i != 0 => return Err(AutomatonError::MisplacedEndmarker),
            TapeSymbol::RightEnd if i + 1 != zx.len() => {
                return Err(AutomatonError::MisplacedEndmarker)
            }
            TapeSymbol::Input(s) if s >= a.alphabet().len() => {
                return Err(AutomatonError::SymbolIndex(s))
            }
            _ => {}
        }
    }
    let last = zx.len() - 1;
    let gamma = exits_right(a, zx, 0, a.initial());
    let tau = (0..n).map(|p| exits_right(a, zx, last, p)).collect();
    Ok(ReachTables::from_masks(n, gamma, tau))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn always_right() -> TwoWayNfa {
        TwoWayNfa::with_states(
            1,
            vec!['a', 'b'],
            0,
            &[0],
            [
                (0, TapeSymbol::LeftEnd, 0, Dir::R),
                (0, TapeSymbol::Input(0), 0, Dir::R),
                (0, TapeSymbol::Input(1), 0, Dir::R),
                (0, TapeSymbol::RightEnd, 0, Dir::R),
            ],
        )
        .unwrap()
    }

    #[test]
    fn always_right_accepts_everything() {
        let a = always_right();
        assert!(accepts_2nfa(&a, &[0, 1]).unwrap());
        assert!(accepts_2nfa(&a, &[]).unwrap());
    }

    #[test]
    fn no_move_from_left_endmarker_rejects() {
        let a = TwoWayNfa::with_states(
            1,
            vec!['a'],
            0,
            &[0],
            [(0, TapeSymbol::Input(0), 0, Dir::R), (0, TapeSymbol::RightEnd, 0, Dir::R)],
        )
        .unwrap();
        for w in [vec![], vec![0], vec![0, 0]] {
            assert!(!accepts_2nfa(&a, &w).unwrap());
        }
    }

    #[test]
    fn word_outside_alphabet_is_an_error() {
        assert_eq!(
            accepts_2nfa(&always_right(), &[2]).unwrap_err(),
            AutomatonError::SymbolIndex(2)
        );
    }

    #[test]
    fn kth_from_end_one_way() {
        // q0 loops, q0 -a-> q1 -x-> ... -x-> qk.
        let kth = |k: usize| {
            let mut t = vec![(0, 0, 0), (0, 1, 0), (0, 0, 1)];
            for i in 1..k {
                t.push((i, 0, i + 1));
                t.push((i, 1, i + 1));
            }
            OneWayNfa::with_states(k + 1, vec!['a', 'b'], 0, &[k], t).unwrap()
        };
        let a3 = kth(3);
        assert!(accepts_1nfa(&a3, &a3.encode("aab").unwrap()).unwrap());
        assert!(!accepts_1nfa(&a3, &a3.encode("abaa").unwrap()).unwrap());
        let a4 = kth(4);
        assert!(accepts_1nfa(&a4, &a4.encode("abaa").unwrap()).unwrap());
    }

    #[test]
    fn one_way_trivia() {
        let a = OneWayNfa::with_states(1, vec!['a'], 0, &[], [(0, 0, 0)]).unwrap();
        assert!(!accepts_1nfa(&a, &[0, 0]).unwrap());
        let b = OneWayNfa::with_states(1, vec!['a'], 0, &[0], []).unwrap();
        assert!(accepts_1nfa(&b, &[]).unwrap());
    }

    #[test]
    fn oracle_on_trivial_automaton() {
        let a = always_right();
        let t = gamma_tau_oracle(&a, &end_marked_tape(&[0, 1])[..3]).unwrap();
        assert_eq!(t.gamma_mask(), 1);
        assert_eq!(t.tau_row(0), 1);
    }

    #[test]
    fn oracle_rejects_bad_prefixes() {
        let a = always_right();
        assert_eq!(
            gamma_tau_oracle(&a, &[TapeSymbol::Input(0)]).unwrap_err(),
            AutomatonError::PrefixWithoutLeftEnd
        );
        assert_eq!(
            gamma_tau_oracle(&a, &[TapeSymbol::LeftEnd, TapeSymbol::RightEnd, TapeSymbol::Input(0)])
                .unwrap_err(),
            AutomatonError::MisplacedEndmarker
        );
    }

    #[test]
    fn edges_match_successors() {
        let a = always_right();
        let tape = end_marked_tape(&[0]);
        let from = ConfigNode { state: 0, position: 1 };
        let succ = successors(&a, &tape, from);
        assert_eq!(succ, vec![ConfigNode { state: 0, position: 2 }]);
        assert!(is_edge(&a, &tape, from, succ[0]));
        assert!(!is_edge(&a, &tape, from, ConfigNode { state: 0, position: 0 }));
    }
}
