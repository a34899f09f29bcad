use crate::Dir;
use thiserror::Error;

/// Largest automaton handled by the bit-mask table code.
pub const MAX_TABLE_STATES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("symbol {0:?} is not in the input alphabet")]
    UnknownSymbol(char),
    #[error("symbol index {0} is out of range")]
    SymbolIndex(usize),
    #[error("state index {0} is out of range")]
    StateIndex(usize),
    #[error("transition on the left endmarker from state {from} must move right")]
    LeftEndmarkerMove { from: String },
    #[error("transition on the right endmarker from state {from} moves right into non-final state {to}")]
    RightEndmarkerExit { from: String, to: String },
    #[error("automaton needs at least one state")]
    NoStates,
    #[error("duplicate state name {0:?}")]
    DuplicateState(String),
    #[error("duplicate alphabet symbol {0:?}")]
    DuplicateSymbol(char),
    #[error("alphabet symbol {0:?} is reserved")]
    ReservedSymbol(char),
    #[error("{0} states exceed the table limit of {MAX_TABLE_STATES}")]
    TooManyStates(usize),
    #[error("prefix must start with the left endmarker")]
    PrefixWithoutLeftEnd,
    #[error("the left endmarker may only appear first and the right endmarker only last")]
    MisplacedEndmarker,
    #[error("operation requires a unary alphabet, got {0} symbols")]
    NotUnary(usize),
}

/// Characters that cannot be used as input symbols because the file formats
/// and machine symbol names give them a meaning.
pub const RESERVED_CHARS: &[char] = &['_', '<', '>', '#', '(', ')', '|', '=', '^', ':', '-'];

/// A symbol on the tape of a two-way automaton: an endmarker or the index of
/// an input symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TapeSymbol {
    LeftEnd,
    Input(usize),
    RightEnd,
}

fn check_alphabet(alphabet: &[char]) -> Result<(), AutomatonError> {
    for (i, &c) in alphabet.iter().enumerate() {
        if RESERVED_CHARS.contains(&c) || c.is_whitespace() {
            return Err(AutomatonError::ReservedSymbol(c));
        }
        if alphabet[..i].contains(&c) {
            return Err(AutomatonError::DuplicateSymbol(c));
        }
    }
    Ok(())
}

fn check_states(names: &[String]) -> Result<(), AutomatonError> {
    if names.is_empty() {
        return Err(AutomatonError::NoStates);
    }
    for (i, s) in names.iter().enumerate() {
        if names[..i].contains(s) {
            return Err(AutomatonError::DuplicateState(s.clone()));
        }
    }
    Ok(())
}

/// Translates a string over the alphabet into symbol indices.
pub fn encode_word(alphabet: &[char], w: &str) -> Result<Vec<usize>, AutomatonError> {
    w.chars()
        .map(|c| {
            alphabet
                .iter()
                .position(|&a| a == c)
                .ok_or(AutomatonError::UnknownSymbol(c))
        })
        .collect()
}

/// Inverse of [`encode_word`].
pub fn decode_word(alphabet: &[char], w: &[usize]) -> String {
    w.iter().map(|&i| alphabet[i]).collect()
}

/// One-way nondeterministic finite automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneWayNfa {
    state_names: Vec<String>,
    alphabet: Vec<char>,
    initial: usize,
    finals: Vec<bool>,
    /// `delta[p][a]` is the sorted list of successors.
    delta: Vec<Vec<Vec<usize>>>,
}

impl OneWayNfa {
    pub fn new(
        state_names: Vec<String>,
        alphabet: Vec<char>,
        initial: usize,
        finals: &[usize],
        transitions: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self, AutomatonError> {
        check_states(&state_names)?;
        check_alphabet(&alphabet)?;
        let n = state_names.len();
        if initial >= n {
            return Err(AutomatonError::StateIndex(initial));
        }
        let mut fin = vec![false; n];
        for &f in finals {
            *fin.get_mut(f).ok_or(AutomatonError::StateIndex(f))? = true;
        }
        let mut delta = vec![vec![Vec::new(); alphabet.len()]; n];
        for (p, a, q) in transitions {
            if p >= n {
                return Err(AutomatonError::StateIndex(p));
            }
            if q >= n {
                return Err(AutomatonError::StateIndex(q));
            }
            if a >= alphabet.len() {
                return Err(AutomatonError::SymbolIndex(a));
            }
            delta[p][a].push(q);
        }
        for row in &mut delta {
            for set in row {
                set.sort_unstable();
                set.dedup();
            }
        }
        Ok(OneWayNfa {
            state_names,
            alphabet,
            initial,
            finals: fin,
            delta,
        })
    }

    /// Convenience constructor with generated state names `q0..q{n-1}`.
    pub fn with_states(
        n: usize,
        alphabet: Vec<char>,
        initial: usize,
        finals: &[usize],
        transitions: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self, AutomatonError> {
        Self::new(
            (0..n).map(|i| format!("q{i}")).collect(),
            alphabet,
            initial,
            finals,
            transitions,
        )
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }
    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }
    pub fn initial(&self) -> usize {
        self.initial
    }
    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }
    pub fn finals(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&q| self.finals[q]).collect()
    }
    pub fn state_name(&self, q: usize) -> &str {
        &self.state_names[q]
    }
    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }
    pub fn delta(&self, p: usize, a: usize) -> &[usize] {
        &self.delta[p][a]
    }
    pub fn is_deterministic(&self) -> bool {
        self.delta.iter().all(|row| row.iter().all(|s| s.len() <= 1))
    }

    /// All transitions `(p, a, q)` in canonical order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, qs)| qs.iter().map(move |&q| (p, a, q)))
        })
    }

    pub fn encode(&self, w: &str) -> Result<Vec<usize>, AutomatonError> {
        encode_word(&self.alphabet, w)
    }

    /// |Σ|·|Q|².
    pub fn size_metric(&self) -> u64 {
        let n = self.num_states() as u64;
        self.alphabet.len() as u64 * n * n
    }
}

/// Two-way nondeterministic finite automaton with endmarkers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoWayNfa {
    state_names: Vec<String>,
    alphabet: Vec<char>,
    initial: usize,
    finals: Vec<bool>,
    /// `delta[p][x]` with x = 0 for ⊢, 1..=|Σ| for inputs, |Σ|+1 for ⊣.
    delta: Vec<Vec<Vec<(usize, Dir)>>>,
}

impl TwoWayNfa {
    /// Builds an automaton, rejecting transitions that violate the
    /// endmarker discipline.
    pub fn new(
        state_names: Vec<String>,
        alphabet: Vec<char>,
        initial: usize,
        finals: &[usize],
        transitions: impl IntoIterator<Item = (usize, TapeSymbol, usize, Dir)>,
    ) -> Result<Self, AutomatonError> {
        check_states(&state_names)?;
        check_alphabet(&alphabet)?;
        let n = state_names.len();
        if initial >= n {
            return Err(AutomatonError::StateIndex(initial));
        }
        let mut fin = vec![false; n];
        for &f in finals {
            *fin.get_mut(f).ok_or(AutomatonError::StateIndex(f))? = true;
        }
        let width = alphabet.len() + 2;
        let mut delta = vec![vec![Vec::new(); width]; n];
        for (p, x, q, d) in transitions {
            if p >= n {
                return Err(AutomatonError::StateIndex(p));
            }
            if q >= n {
                return Err(AutomatonError::StateIndex(q));
            }
            let col = match x {
                TapeSymbol::LeftEnd => {
                    if d != Dir::R {
                        return Err(AutomatonError::LeftEndmarkerMove {
                            from: state_names[p].clone(),
                        });
                    }
                    0
                }
                TapeSymbol::Input(a) => {
                    if a >= alphabet.len() {
                        return Err(AutomatonError::SymbolIndex(a));
                    }
                    a + 1
                }
                TapeSymbol::RightEnd => {
                    if d == Dir::R && !fin[q] {
                        return Err(AutomatonError::RightEndmarkerExit {
                            from: state_names[p].clone(),
                            to: state_names[q].clone(),
                        });
                    }
                    width - 1
                }
            };
            delta[p][col].push((q, d));
        }
        for row in &mut delta {
            for set in row {
                set.sort_unstable();
                set.dedup();
            }
        }
        Ok(TwoWayNfa {
            state_names,
            alphabet,
            initial,
            finals: fin,
            delta,
        })
    }

    /// Convenience constructor with generated state names `q0..q{n-1}`.
    pub fn with_states(
        n: usize,
        alphabet: Vec<char>,
        initial: usize,
        finals: &[usize],
        transitions: impl IntoIterator<Item = (usize, TapeSymbol, usize, Dir)>,
    ) -> Result<Self, AutomatonError> {
        Self::new(
            (0..n).map(|i| format!("q{i}")).collect(),
            alphabet,
            initial,
            finals,
            transitions,
        )
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }
    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }
    pub fn initial(&self) -> usize {
        self.initial
    }
    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }
    pub fn finals(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&q| self.finals[q]).collect()
    }
    pub fn state_name(&self, q: usize) -> &str {
        &self.state_names[q]
    }
    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    fn column(&self, x: TapeSymbol) -> usize {
        match x {
            TapeSymbol::LeftEnd => 0,
            TapeSymbol::Input(a) => a + 1,
            TapeSymbol::RightEnd => self.alphabet.len() + 1,
        }
    }

    /// The tape symbols in canonical order: ⊢, inputs, ⊣.
    pub fn tape_symbols(&self) -> Vec<TapeSymbol> {
        let mut v = vec![TapeSymbol::LeftEnd];
        v.extend((0..self.alphabet.len()).map(TapeSymbol::Input));
        v.push(TapeSymbol::RightEnd);
        v
    }

    pub fn delta(&self, p: usize, x: TapeSymbol) -> &[(usize, Dir)] {
        &self.delta[p][self.column(x)]
    }

    /// Whether `(q, d) ∈ δ(p, x)`.
    pub fn has_move(&self, p: usize, x: TapeSymbol, q: usize, d: Dir) -> bool {
        self.delta(p, x).binary_search(&(q, d)).is_ok()
    }

    /// All transitions `(p, x, q, d)` in canonical order.
    pub fn transitions(&self) -> Vec<(usize, TapeSymbol, usize, Dir)> {
        let syms = self.tape_symbols();
        let mut out = Vec::new();
        for p in 0..self.num_states() {
            for &x in &syms {
                for &(q, d) in self.delta(p, x) {
                    out.push((p, x, q, d));
                }
            }
        }
        out
    }

    pub fn encode(&self, w: &str) -> Result<Vec<usize>, AutomatonError> {
        encode_word(&self.alphabet, w)
    }

    /// |Σ|·|Q|².
    pub fn size_metric(&self) -> u64 {
        let n = self.num_states() as u64;
        self.alphabet.len() as u64 * n * n
    }

    /// Embeds a one-way automaton: every move goes right, ⊢ is skipped in
    /// the initial state and accepting states leave through ⊣.
    pub fn from_one_way(a: &OneWayNfa) -> TwoWayNfa {
        let mut trans = vec![(a.initial(), TapeSymbol::LeftEnd, a.initial(), Dir::R)];
        for (p, x, q) in a.transitions() {
            trans.push((p, TapeSymbol::Input(x), q, Dir::R));
        }
        for f in a.finals() {
            trans.push((f, TapeSymbol::RightEnd, f, Dir::R));
        }
        TwoWayNfa::new(
            a.state_names().to_vec(),
            a.alphabet().to_vec(),
            a.initial(),
            &a.finals(),
            trans,
        )
        .expect("embedding of a valid one-way automaton is valid")
    }

    /// Returns an automaton with exactly one final state. Automata that
    /// already have a single final state are returned unchanged; otherwise a
    /// fresh state `q_f` is added and every accepting exit across ⊣ is
    /// redirected to it.
    pub fn single_final(&self) -> TwoWayNfa {
        if self.finals().len() == 1 {
            return self.clone();
        }
        let n = self.num_states();
        let mut names = self.state_names.clone();
        let mut fresh = "qf".to_string();
        while names.contains(&fresh) {
            fresh.push('\'');
        }
        names.push(fresh);
        let trans = self.transitions().into_iter().map(|(p, x, q, d)| {
            if x == TapeSymbol::RightEnd && d == Dir::R {
                (p, x, n, d)
            } else {
                (p, x, q, d)
            }
        });
        TwoWayNfa::new(names, self.alphabet.clone(), self.initial, &[n], trans)
            .expect("normalisation preserves validity")
    }

    /// The unique final state, if there is exactly one.
    pub fn unique_final(&self) -> Option<usize> {
        match self.finals().as_slice() {
            [f] => Some(*f),
            _ => None,
        }
    }
}

impl OneWayNfa {
    /// Returns an automaton with exactly one final state that has no
    /// outgoing transitions and accepts the same non-empty words. Acceptance
    /// of ε is not preserved in general, so callers handle ε themselves.
    /// Automata whose single final state is already a sink are unchanged.
    pub fn single_final(&self) -> OneWayNfa {
        if let [f] = self.finals().as_slice() {
            let sink = (0..self.alphabet.len()).all(|a| self.delta(*f, a).is_empty());
            if sink && *f != self.initial {
                return self.clone();
            }
        }
        let n = self.num_states();
        let mut names = self.state_names.clone();
        let mut fresh = "qf".to_string();
        while names.contains(&fresh) {
            fresh.push('\'');
        }
        names.push(fresh);
        let mut trans: Vec<_> = self.transitions().collect();
        for (p, a, q) in self.transitions() {
            if self.finals[q] {
                trans.push((p, a, n));
            }
        }
        OneWayNfa::new(names, self.alphabet.clone(), self.initial, &[n], trans)
            .expect("normalisation preserves validity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_endmarker_must_move_right() {
        let err = TwoWayNfa::with_states(
            1,
            vec!['a'],
            0,
            &[0],
            [(0, TapeSymbol::LeftEnd, 0, Dir::L)],
        )
        .unwrap_err();
        assert!(matches!(err, AutomatonError::LeftEndmarkerMove { .. }));
    }

    #[test]
    fn right_endmarker_exit_needs_final_target() {
        let err = TwoWayNfa::with_states(
            2,
            vec!['a'],
            0,
            &[1],
            [(1, TapeSymbol::RightEnd, 0, Dir::R)],
        )
        .unwrap_err();
        assert!(matches!(err, AutomatonError::RightEndmarkerExit { .. }));
        // Moving left on ⊣ is always allowed.
        TwoWayNfa::with_states(2, vec!['a'], 0, &[1], [(1, TapeSymbol::RightEnd, 0, Dir::L)])
            .unwrap();
    }

    #[test]
    fn reserved_and_duplicate_symbols_rejected() {
        assert_eq!(
            OneWayNfa::with_states(1, vec!['<'], 0, &[], []).unwrap_err(),
            AutomatonError::ReservedSymbol('<')
        );
        assert_eq!(
            OneWayNfa::with_states(1, vec!['a', 'a'], 0, &[], []).unwrap_err(),
            AutomatonError::DuplicateSymbol('a')
        );
    }

    #[test]
    fn transitions_are_deduplicated_and_sorted() {
        let a = TwoWayNfa::with_states(
            2,
            vec!['a'],
            0,
            &[1],
            [
                (0, TapeSymbol::Input(0), 1, Dir::R),
                (0, TapeSymbol::Input(0), 0, Dir::L),
                (0, TapeSymbol::Input(0), 1, Dir::R),
            ],
        )
        .unwrap();
        assert_eq!(a.delta(0, TapeSymbol::Input(0)), &[(0, Dir::L), (1, Dir::R)]);
        assert!(a.has_move(0, TapeSymbol::Input(0), 0, Dir::L));
        assert!(!a.has_move(0, TapeSymbol::Input(0), 0, Dir::R));
    }

    #[test]
    fn size_metrics() {
        let a = OneWayNfa::with_states(5, vec!['a', 'b'], 0, &[], []).unwrap();
        assert_eq!(a.size_metric(), 50);
    }

    #[test]
    fn single_final_is_identity_for_one_final() {
        let a = TwoWayNfa::with_states(
            2,
            vec!['a'],
            0,
            &[1],
            [(0, TapeSymbol::LeftEnd, 1, Dir::R)],
        )
        .unwrap();
        assert_eq!(a.single_final(), a);
        let b = TwoWayNfa::with_states(
            2,
            vec!['a'],
            0,
            &[0, 1],
            [
                (0, TapeSymbol::LeftEnd, 0, Dir::R),
                (0, TapeSymbol::RightEnd, 1, Dir::R),
                (0, TapeSymbol::RightEnd, 0, Dir::R),
            ],
        )
        .unwrap();
        let nb = b.single_final();
        assert_eq!(nb.num_states(), 3);
        assert_eq!(nb.finals(), vec![2]);
        assert_eq!(nb.delta(0, TapeSymbol::RightEnd), &[(2, Dir::R)]);
    }

    #[test]
    fn encode_decode_roundtrip() {
        let w = encode_word(&['a', 'b'], "abba").unwrap();
        assert_eq!(w, vec![0, 1, 1, 0]);
        assert_eq!(decode_word(&['a', 'b'], &w), "abba");
        assert_eq!(
            encode_word(&['a', 'b'], "abc").unwrap_err(),
            AutomatonError::UnknownSymbol('c')
        );
    }
}
