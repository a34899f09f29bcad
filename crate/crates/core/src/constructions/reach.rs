//! Reference divide-and-conquer reachability functions. They are plain
//! recursive functions (not machines) and serve as oracles for the stack
//! machines that implement them on tape.

use crate::automata::{end_marked_tape, is_edge, ConfigNode, OneWayNfa, TwoWayNfa};

fn node(state: usize, position: usize) -> ConfigNode {
    ConfigNode { state, position }
}

/// Whether the computation graph of `a` on ⊢w⊣ has a path of length at most
/// `t` from `(p, i)` to `(q, j)`. Split points range over every state and
/// every position `0..=m+1`, states outermost.
pub fn reachable_fn(a: &TwoWayNfa, w: &[usize], p: usize, i: usize, q: usize, j: usize, t: u64) -> bool {
    let tape = end_marked_tape(w);
    reachable_on(a, &tape, p, i, q, j, t)
}

fn reachable_on(
    a: &TwoWayNfa,
    tape: &[crate::automata::TapeSymbol],
    p: usize,
    i: usize,
    q: usize,
    j: usize,
    t: u64,
) -> bool {
    if (p, i) == (q, j) {
        return true;
    }
    if t == 0 {
        return false;
    }
    if t == 1 {
        return is_edge(a, tape, node(p, i), node(q, j));
    }
    for r in 0..a.num_states() {
        for l in 0..tape.len() {
            if reachable_on(a, tape, p, i, r, l, t / 2) && reachable_on(a, tape, r, l, q, j, t.div_ceil(2)) {
                return true;
            }
        }
    }
    false
}

/// Number of vertices `K = n(m+2)+1` of the computation graph.
pub fn graph_size(n: usize, m: usize) -> u64 {
    (n * (m + 2) + 1) as u64
}

/// Acceptance through [`reachable_fn`] for an automaton with a single final
/// state: a path from `(q0, 0)` to `(q_f, m+2)` of length at most K.
pub fn accepts_by_reachable(a: &TwoWayNfa, w: &[usize]) -> Option<bool> {
    let f = a.unique_final()?;
    let m = w.len();
    Some(reachable_fn(a, w, a.initial(), 0, f, m + 2, graph_size(a.num_states(), m)))
}

/// Whether the one-way automaton `a` can go from state `p` after `i` symbols
/// to state `q` after `j` symbols of `w`. Both halves of a split share the
/// midpoint ⌊(i+j)/2⌋.
pub fn reachable_one_way_fn(a: &OneWayNfa, w: &[usize], p: usize, i: usize, q: usize, j: usize) -> bool {
    if (p, i) == (q, j) {
        return true;
    }
    if j == i + 1 && a.delta(p, w[j - 1]).contains(&q) {
        return true;
    }
    if j > i + 1 {
        let mid = (i + j) / 2;
        for r in 0..a.num_states() {
            if reachable_one_way_fn(a, w, p, i, r, mid) && reachable_one_way_fn(a, w, r, mid, q, j) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts_1nfa, accepts_2nfa, successors};
    use crate::harness::{random_1nfa, random_2nfa, random_word, GeneratorSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::VecDeque;

    /// Bounded breadth-first search: shortest path length, if any.
    fn distance(a: &TwoWayNfa, w: &[usize], from: ConfigNode, to: ConfigNode) -> Option<u64> {
        let tape = end_marked_tape(w);
        let mut dist = std::collections::HashMap::from([(from, 0u64)]);
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                return Some(dist[&v]);
            }
            for s in successors(a, &tape, v) {
                if !dist.contains_key(&s) {
                    dist.insert(s, dist[&v] + 1);
                    queue.push_back(s);
                }
            }
        }
        None
    }

    /// The published one-way recursion, whose second half starts at
    /// ⌈(i+j)/2⌉.
    fn literal_one_way(a: &OneWayNfa, w: &[usize], p: usize, i: usize, q: usize, j: usize) -> bool {
        if (p, i) == (q, j) {
            return true;
        }
        if j == i + 1 && a.delta(p, w[j - 1]).contains(&q) {
            return true;
        }
        if j > i + 1 {
            for r in 0..a.num_states() {
                if literal_one_way(a, w, p, i, r, (i + j) / 2) && literal_one_way(a, w, r, (i + j).div_ceil(2), q, j) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn base_cases() {
        let a = random_2nfa(&GeneratorSpec::new(2, 2, 0));
        assert!(reachable_fn(&a, &[0, 1], 1, 2, 1, 2, 0));
        assert!(!reachable_fn(&a, &[0, 1], 1, 2, 0, 2, 0));
        let b = random_1nfa(&GeneratorSpec::new(2, 2, 0));
        assert!(reachable_one_way_fn(&b, &[0, 1], 1, 1, 1, 1));
    }

    #[test]
    fn matches_bounded_bfs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for case in 0..500 {
            let a = random_2nfa(&GeneratorSpec::new(2 + case % 2, 2, case as u64).with_density(0.3));
            let m = rng.gen_range(0..4);
            let w = random_word(&mut rng, 2, m);
            let n = a.num_states();
            let from = node(rng.gen_range(0..n), rng.gen_range(0..m + 2));
            let to = node(rng.gen_range(0..n), rng.gen_range(0..m + 3));
            let t = rng.gen_range(0..7);
            let want = distance(&a, &w, from, to).is_some_and(|d| d <= t);
            assert_eq!(reachable_fn(&a, &w, from.state, from.position, to.state, to.position, t), want);
        }
    }

    #[test]
    fn acceptance_through_reachability() {
        for seed in 0..20 {
            let a = random_2nfa(&GeneratorSpec::new(3, 2, seed).with_density(0.3)).single_final();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for m in 0..4 {
                let w = random_word(&mut rng, 2, m);
                assert_eq!(accepts_by_reachable(&a, &w), Some(accepts_2nfa(&a, &w).unwrap()));
            }
        }
    }

    #[test]
    fn one_way_matches_subset_simulation() {
        let mut literal_misses = 0;
        for seed in 0..40 {
            let a = random_1nfa(&GeneratorSpec::new(3, 2, seed).with_density(0.4)).single_final();
            let f = a.finals()[0];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for m in 1..7 {
                let w = random_word(&mut rng, 2, m);
                let want = accepts_1nfa(&a, &w).unwrap();
                assert_eq!(reachable_one_way_fn(&a, &w, a.initial(), 0, f, m), want);
                if literal_one_way(&a, &w, a.initial(), 0, f, m) != want {
                    literal_misses += 1;
                }
            }
        }
        // The published split skips a symbol on odd-length intervals.
        assert!(literal_misses > 0);
    }
}
