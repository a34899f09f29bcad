//! Named automaton families with closed-form membership predicates, used as
//! a second oracle next to the brute-force simulations.

use crate::automata::{OneWayNfa, TapeSymbol, TwoWayNfa};
use crate::constructions::Automaton;
use crate::Dir;
use std::sync::Arc;

/// Membership predicate on words (letter indices).
pub type Predicate = Arc<dyn Fn(&[usize]) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct Witness {
    pub name: String,
    pub automaton: Automaton,
    pub predicate: Predicate,
}

impl std::fmt::Debug for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Witness").field("name", &self.name).finish_non_exhaustive()
    }
}

/// Words over {a, b} whose k-th symbol from the end is `a`: guess the
/// position, then count k−1 more symbols. k+1 states.
pub fn kth_from_end(k: usize) -> OneWayNfa {
    assert!(k >= 1);
    let mut trans = vec![(0, 0, 0), (0, 1, 0), (0, 0, 1)];
    for i in 1..k {
        trans.push((i, 0, i + 1));
        trans.push((i, 1, i + 1));
    }
    OneWayNfa::with_states(k + 1, vec!['a', 'b'], 0, &[k], trans).expect("valid family member")
}

pub fn kth_from_end_predicate(k: usize) -> Predicate {
    Arc::new(move |w: &[usize]| w.len() >= k && w[w.len() - k] == 0)
}

/// Unary words whose length is divisible by one of `divisors`: guess a
/// divisor on ⊢, then count modulo it. Σ divisors states.
pub fn unary_divisibility(divisors: &[usize]) -> TwoWayNfa {
    assert!(!divisors.is_empty() && divisors.iter().all(|&d| d >= 1));
    let mut trans = Vec::new();
    let mut finals = Vec::new();
    let mut base = 0;
    for &d in divisors {
        trans.push((0, TapeSymbol::LeftEnd, base, Dir::R));
        for i in 0..d {
            trans.push((base + i, TapeSymbol::Input(0), base + (i + 1) % d, Dir::R));
        }
        trans.push((base, TapeSymbol::RightEnd, base, Dir::R));
        finals.push(base);
        base += d;
    }
    TwoWayNfa::with_states(base, vec!['a'], 0, &finals, trans).expect("valid family member")
}

pub fn unary_divisibility_predicate(divisors: &[usize]) -> Predicate {
    let ds = divisors.to_vec();
    Arc::new(move |w: &[usize]| ds.iter().any(|&d| w.len() % d == 0))
}

/// Unary words of length at least `t`, counted on a left-to-right sweep,
/// followed by a sweep back to ⊢ and a final crossing. t + 3 states.
pub fn unary_threshold(t: usize) -> TwoWayNfa {
    // States 0..=t count (saturating at t); `back` returns to ⊢, `cross`
    // walks to ⊣ and exits.
    let (back, cross) = (t + 1, t + 2);
    let mut trans = vec![(0, TapeSymbol::LeftEnd, 0, Dir::R)];
    for i in 0..=t {
        trans.push((i, TapeSymbol::Input(0), (i + 1).min(t), Dir::R));
    }
    trans.push((t, TapeSymbol::RightEnd, back, Dir::L));
    trans.push((back, TapeSymbol::Input(0), back, Dir::L));
    trans.push((back, TapeSymbol::LeftEnd, cross, Dir::R));
    trans.push((cross, TapeSymbol::Input(0), cross, Dir::R));
    trans.push((cross, TapeSymbol::RightEnd, cross, Dir::R));
    TwoWayNfa::with_states(t + 3, vec!['a'], 0, &[cross], trans).expect("valid family member")
}

pub fn unary_threshold_predicate(t: usize) -> Predicate {
    Arc::new(move |w: &[usize]| w.len() >= t)
}

/// Words over {a, b} ending in `a`, recognised by walking to ⊣, checking the
/// last symbol, and then sweeping to ⊢ and back `rounds` times before
/// leaving through ⊣. 2 + 2·rounds states.
pub fn ping_pong(rounds: usize) -> TwoWayNfa {
    assert!(rounds >= 1);
    let (go, read) = (0, 1);
    let back = |i: usize| 2 + 2 * i;
    let fwd = |i: usize| 3 + 2 * i;
    let mut trans = vec![
        (go, TapeSymbol::LeftEnd, go, Dir::R),
        (go, TapeSymbol::Input(0), go, Dir::R),
        (go, TapeSymbol::Input(1), go, Dir::R),
        (go, TapeSymbol::RightEnd, read, Dir::L),
        (read, TapeSymbol::Input(0), back(0), Dir::L),
    ];
    for i in 0..rounds {
        for x in 0..2 {
            trans.push((back(i), TapeSymbol::Input(x), back(i), Dir::L));
            trans.push((fwd(i), TapeSymbol::Input(x), fwd(i), Dir::R));
        }
        trans.push((back(i), TapeSymbol::LeftEnd, fwd(i), Dir::R));
        if i + 1 < rounds {
            trans.push((fwd(i), TapeSymbol::RightEnd, back(i + 1), Dir::L));
        } else {
            trans.push((fwd(i), TapeSymbol::RightEnd, fwd(i), Dir::R));
        }
    }
    let n = 2 + 2 * rounds;
    TwoWayNfa::with_states(n, vec!['a', 'b'], go, &[fwd(rounds - 1)], trans).expect("valid family member")
}

pub fn ping_pong_predicate() -> Predicate {
    Arc::new(|w: &[usize]| w.last() == Some(&0))
}

/// The standard witness corpus: small members of every family.
pub fn witness_families() -> Vec<Witness> {
    let mut v = Vec::new();
    for k in [2, 3, 4, 5] {
        v.push(Witness {
            name: format!("kth-from-end-{k}"),
            automaton: Automaton::OneWay(kth_from_end(k)),
            predicate: kth_from_end_predicate(k),
        });
    }
    for ds in [vec![2], vec![3], vec![2, 3]] {
        let label: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
        v.push(Witness {
            name: format!("unary-div-{}", label.join("-")),
            automaton: Automaton::TwoWay(unary_divisibility(&ds)),
            predicate: unary_divisibility_predicate(&ds),
        });
    }
    for t in [1, 2] {
        v.push(Witness {
            name: format!("unary-threshold-{t}"),
            automaton: Automaton::TwoWay(unary_threshold(t)),
            predicate: unary_threshold_predicate(t),
        });
    }
    for r in [1, 2] {
        v.push(Witness {
            name: format!("ping-pong-{r}"),
            automaton: Automaton::TwoWay(ping_pong(r)),
            predicate: ping_pong_predicate(),
        });
    }
    v
}

/// Looks up a member of [`witness_families`] by name.
pub fn witness(name: &str) -> Option<Witness> {
    witness_families().into_iter().find(|w| w.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::encode_word;
    use crate::harness::words_of_length;

    #[test]
    fn kth_from_end_examples() {
        let p = kth_from_end_predicate(3);
        let ab = ['a', 'b'];
        assert!(p(&encode_word(&ab, "aab").unwrap()));
        assert!(!p(&encode_word(&ab, "abaa").unwrap()));
        assert!(kth_from_end_predicate(4)(&encode_word(&ab, "abaa").unwrap()));
        assert_eq!(kth_from_end(4).num_states(), 5);
    }

    #[test]
    fn unary_even_length() {
        let a = unary_divisibility(&[2]);
        assert!(crate::automata::accepts_2nfa(&a, &[0; 4]).unwrap());
        assert!(!crate::automata::accepts_2nfa(&a, &[0; 3]).unwrap());
    }

    #[test]
    fn oracles_match_predicates() {
        for w in witness_families() {
            let k = w.automaton.alphabet().len();
            for len in 0..=9 {
                for word in words_of_length(k, len) {
                    assert_eq!(w.automaton.accepts(&word).unwrap(), (w.predicate)(&word), "{} {word:?}", w.name);
                }
            }
        }
    }
}
