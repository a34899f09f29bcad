use super::nfa::{OneWayNfa, TwoWayNfa};
use super::oracle::accepts_2nfa;

/// Number of nodes of the complete trie of depth `depth` over `k` letters.
pub fn trie_size(k: usize, depth: usize) -> usize {
    (0..=depth).map(|d| k.pow(d as u32)).sum()
}

/// A deterministic acceptance trie that agrees with `a` on every word of
/// length at most `max_len`. Node `0` is the root; longer words fall into a
/// rejecting sink, which is the last state.
pub fn short_string_classifier(a: &TwoWayNfa, max_len: usize) -> OneWayNfa {
    let k = a.alphabet().len();
    let nodes = trie_size(k, max_len);
    let sink = nodes;
    let mut names = Vec::with_capacity(nodes + 1);
    let mut words: Vec<Vec<usize>> = Vec::with_capacity(nodes);
    let mut finals = Vec::new();
    let mut trans = Vec::new();
    // Level order: node ids of a level follow the ids of the previous one,
    // children of node v are first_child(v) + letter.
    words.push(Vec::new());
    let mut i = 0;
    while i < words.len() {
        let w = words[i].clone();
        if accepts_2nfa(a, &w).expect("trie words are over the alphabet") {
            finals.push(i);
        }
        names.push(if w.is_empty() {
            "eps".to_string()
        } else {
            format!("t{}", super::nfa::decode_word(a.alphabet(), &w))
        });
        for x in 0..k {
            if w.len() < max_len {
                let mut c = w.clone();
                c.push(x);
                trans.push((i, x, words.len()));
                words.push(c);
            } else {
                trans.push((i, x, sink));
            }
        }
        i += 1;
    }
    debug_assert_eq!(words.len(), nodes);
    names.push("sink".to_string());
    for x in 0..k {
        trans.push((sink, x, sink));
    }
    OneWayNfa::new(names, a.alphabet().to_vec(), 0, &finals, trans)
        .expect("trie is a valid automaton")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::nfa::TapeSymbol;
    use crate::automata::oracle::accepts_1nfa;
    use crate::Dir;

    fn even_length() -> TwoWayNfa {
        use TapeSymbol::*;
        TwoWayNfa::with_states(
            2,
            vec!['a', 'b'],
            0,
            &[0],
            [
                (0, LeftEnd, 0, Dir::R),
                (0, Input(0), 1, Dir::R),
                (0, Input(1), 1, Dir::R),
                (1, Input(0), 0, Dir::R),
                (1, Input(1), 0, Dir::R),
                (0, RightEnd, 0, Dir::R),
            ],
        )
        .unwrap()
    }

    #[test]
    fn depth_zero_has_two_states() {
        let t = short_string_classifier(&even_length(), 0);
        assert_eq!(t.num_states(), 2);
        assert!(accepts_1nfa(&t, &[]).unwrap());
    }

    #[test]
    fn depth_three_binary_size() {
        let t = short_string_classifier(&even_length(), 3);
        assert_eq!(t.num_states(), 16);
        assert!(t.num_states() <= (2usize.pow(4) - 1) / (2 - 1) + 1);
        assert!(t.is_deterministic());
    }

    #[test]
    fn unary_trie_is_a_path() {
        let a = TwoWayNfa::with_states(1, vec!['a'], 0, &[], []).unwrap();
        assert_eq!(short_string_classifier(&a, 4).num_states(), 6);
    }
}
