//! Seeded random automaton generators.

use crate::automata::{OneWayNfa, TapeSymbol, TwoWayNfa};
use crate::Dir;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Parameters of a random automaton.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub sigma: usize,
    /// Probability of each admissible transition; 1.0 gives the full relation.
    pub density: f64,
    pub seed: u64,
    /// Probability of each state being final.
    pub final_prob: f64,
}

impl GeneratorSpec {
    pub fn new(n: usize, sigma: usize, seed: u64) -> Self {
        GeneratorSpec {
            n,
            sigma,
            density: 0.25,
            seed,
            final_prob: 0.35,
        }
    }

    pub fn unary(n: usize, seed: u64) -> Self {
        Self::new(n, 1, seed)
    }

    pub fn with_density(mut self, d: f64) -> Self {
        self.density = d;
        self
    }
}

/// Alphabet `a, b, c, …` of the given size.
pub fn letters(sigma: usize) -> Vec<char> {
    (0..sigma).map(|i| (b'a' + i as u8) as char).collect()
}

fn finals(rng: &mut ChaCha8Rng, spec: &GeneratorSpec) -> Vec<usize> {
    (0..spec.n).filter(|_| rng.gen_bool(spec.final_prob)).collect()
}

/// A random two-way automaton respecting the endmarker rules: moves on ⊢
/// go right, and right moves on ⊣ only enter final states.
pub fn random_2nfa(spec: &GeneratorSpec) -> TwoWayNfa {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let fin = finals(&mut rng, spec);
    let mut symbols = vec![TapeSymbol::LeftEnd];
    symbols.extend((0..spec.sigma).map(TapeSymbol::Input));
    symbols.push(TapeSymbol::RightEnd);
    let mut trans = Vec::new();
    for p in 0..spec.n {
        for &x in &symbols {
            for q in 0..spec.n {
                for d in [Dir::L, Dir::R] {
                    let allowed = match x {
                        TapeSymbol::LeftEnd => d == Dir::R,
                        TapeSymbol::RightEnd => d == Dir::L || fin.contains(&q),
                        TapeSymbol::Input(_) => true,
                    };
                    if allowed && rng.gen_bool(spec.density) {
                        trans.push((p, x, q, d));
                    }
                }
            }
        }
    }
    TwoWayNfa::with_states(spec.n, letters(spec.sigma), 0, &fin, trans)
        .expect("generator respects the endmarker rules")
}

/// A random unary two-way automaton over `{a}`.
pub fn random_unary_2nfa(spec: &GeneratorSpec) -> TwoWayNfa {
    random_2nfa(&GeneratorSpec { sigma: 1, ..spec.clone() })
}

/// A random one-way automaton.
pub fn random_1nfa(spec: &GeneratorSpec) -> OneWayNfa {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let fin = finals(&mut rng, spec);
    let mut trans = Vec::new();
    for p in 0..spec.n {
        for a in 0..spec.sigma {
            for q in 0..spec.n {
                if rng.gen_bool(spec.density) {
                    trans.push((p, a, q));
                }
            }
        }
    }
    OneWayNfa::with_states(spec.n, letters(spec.sigma), 0, &fin, trans).expect("valid generator output")
}

/// A uniformly random word of length `len` over `sigma` letters.
pub fn random_word(rng: &mut impl Rng, sigma: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..sigma)).collect()
}

/// All words of length `len` over `sigma` letters in lexicographic order.
pub fn words_of_length(sigma: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (sigma as u64).checked_pow(len as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut i| {
        let mut w = vec![0; len];
        for c in w.iter_mut().rev() {
            *c = (i % sigma as u64) as usize;
            i /= sigma as u64;
        }
        w
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_automaton() {
        let s = GeneratorSpec::new(4, 2, 7);
        assert_eq!(random_2nfa(&s), random_2nfa(&s));
        assert_eq!(random_1nfa(&s), random_1nfa(&s));
    }

    #[test]
    fn density_extremes() {
        let a = random_2nfa(&GeneratorSpec::new(3, 2, 1).with_density(0.0));
        assert!(a.transitions().is_empty());
        let full = random_1nfa(&GeneratorSpec::new(3, 2, 1).with_density(1.0));
        assert_eq!(full.transitions().count(), 3 * 2 * 3);
    }

    #[test]
    fn word_enumeration_is_lexicographic() {
        let v: Vec<_> = words_of_length(2, 2).collect();
        assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(words_of_length(3, 0).count(), 1);
    }
}
