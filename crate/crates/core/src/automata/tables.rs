//! The Shepherdson table calculus: (γ_z, τ_z) and its one-symbol update.

use super::nfa::{AutomatonError, TapeSymbol, TwoWayNfa, MAX_TABLE_STATES};
use crate::Dir;

/// The pair (γ_z, τ_z) for a tape prefix z, stored as bit masks over the
/// state indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReachTables {
    n: usize,
    gamma: u64,
    tau: Vec<u64>,
}

impl ReachTables {
    pub fn from_masks(n: usize, gamma: u64, tau: Vec<u64>) -> Self {
        assert!(n <= MAX_TABLE_STATES && tau.len() == n);
        ReachTables { n, gamma, tau }
    }

    /// Empty γ and τ.
    pub fn empty(n: usize) -> Self {
        Self::from_masks(n, 0, vec![0; n])
    }

    /// The tables of the empty prefix: γ = {q0}, τ = ∅. Updating them with ⊢
    /// yields the tables of "⊢".
    pub fn before_left_end(a: &TwoWayNfa) -> Self {
        let mut t = Self::empty(a.num_states());
        t.gamma = 1 << a.initial();
        t
    }

    /// The tables of the one-symbol prefix "⊢".
    pub fn base(a: &TwoWayNfa) -> Self {
        update_any(a, &Self::before_left_end(a), TapeSymbol::LeftEnd).0
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn gamma_mask(&self) -> u64 {
        self.gamma
    }
    pub fn tau_row(&self, p: usize) -> u64 {
        self.tau[p]
    }
    pub fn in_gamma(&self, q: usize) -> bool {
        self.gamma >> q & 1 == 1
    }
    pub fn in_tau(&self, p: usize, q: usize) -> bool {
        self.tau[p] >> q & 1 == 1
    }
    pub fn gamma(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.in_gamma(q)).collect()
    }
    pub fn tau(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for p in 0..self.n {
            for q in 0..self.n {
                if self.in_tau(p, q) {
                    v.push((p, q));
                }
            }
        }
        v
    }

    /// The bit word u·v: u_i = [i ∈ γ], v_{i·n+j} = [(i, j) ∈ τ].
    pub fn to_bits(&self) -> Vec<bool> {
        let mut bits: Vec<bool> = (0..self.n).map(|q| self.in_gamma(q)).collect();
        for p in 0..self.n {
            bits.extend((0..self.n).map(|q| self.in_tau(p, q)));
        }
        bits
    }

    /// Inverse of [`ReachTables::to_bits`].
    pub fn from_bits(n: usize, bits: &[bool]) -> Option<Self> {
        if bits.len() != n + n * n || n > MAX_TABLE_STATES {
            return None;
        }
        let mask = |s: &[bool]| s.iter().enumerate().fold(0u64, |m, (i, &b)| m | (b as u64) << i);
        let gamma = mask(&bits[..n]);
        let tau = (0..n).map(|p| mask(&bits[n + p * n..n + (p + 1) * n])).collect();
        Some(Self::from_masks(n, gamma, tau))
    }
}

/// Bit masks of left and right successors of every state on every tape
/// symbol, precomputed for the table update.
fn succ_mask(a: &TwoWayNfa, p: usize, x: TapeSymbol, dir: Dir) -> u64 {
    a.delta(p, x)
        .iter()
        .filter(|&&(_, d)| d == dir)
        .fold(0, |m, &(q, _)| m | 1 << q)
}

/// Per-source statistics of the Z_p saturation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SaturationTrace {
    /// Number of passes until a pass added nothing (the final, unproductive
    /// pass included).
    pub passes: Vec<usize>,
    /// Whether one extra pass after the fixpoint left Z_p unchanged.
    pub stable_after_extra_pass: Vec<bool>,
}

fn saturation_pass(a: &TwoWayNfa, t: &ReachTables, x: TapeSymbol, z: &mut u64) -> bool {
    let mut changed = false;
    for r in 0..t.n {
        if *z >> r & 1 == 0 {
            continue;
        }
        let mut left = succ_mask(a, r, x, Dir::L);
        while left != 0 {
            let s = left.trailing_zeros() as usize;
            left &= left - 1;
            let add = t.tau[s] & !*z;
            if add != 0 {
                *z |= add;
                changed = true;
            }
        }
    }
    changed
}

fn update_any(a: &TwoWayNfa, t: &ReachTables, x: TapeSymbol) -> (ReachTables, SaturationTrace) {
    let n = t.n;
    let mut trace = SaturationTrace::default();
    let mut tau = vec![0u64; n];
    for (p, row) in tau.iter_mut().enumerate() {
        // Z_p: states reachable on the new cell from p without leaving z·x
        // to the right, as a least fixed point.
        let mut z = 1u64 << p;
        let mut passes = 1;
        while saturation_pass(a, t, x, &mut z) {
            passes += 1;
        }
        let mut again = z;
        trace.passes.push(passes);
        trace
            .stable_after_extra_pass
            .push(!saturation_pass(a, t, x, &mut again) && again == z);
        for r in (0..n).filter(|&r| z >> r & 1 == 1) {
            *row |= succ_mask(a, r, x, Dir::R);
        }
    }
    let mut gamma = 0;
    for p in (0..n).filter(|&p| t.in_gamma(p)) {
        gamma |= tau[p];
    }
    (ReachTables { n, gamma, tau }, trace)
}

/// Extends the tables of z to the tables of zσ for σ ∈ Σ ∪ {⊣}.
pub fn update_tables(
    a: &TwoWayNfa,
    t: &ReachTables,
    sigma: TapeSymbol,
) -> Result<ReachTables, AutomatonError> {
    update_tables_traced(a, t, sigma).map(|(t, _)| t)
}

/// [`update_tables`] together with the saturation statistics.
pub fn update_tables_traced(
    a: &TwoWayNfa,
    t: &ReachTables,
    sigma: TapeSymbol,
) -> Result<(ReachTables, SaturationTrace), AutomatonError> {
    if a.num_states() > MAX_TABLE_STATES {
        return Err(AutomatonError::TooManyStates(a.num_states()));
    }
    match sigma {
        TapeSymbol::LeftEnd => return Err(AutomatonError::MisplacedEndmarker),
        TapeSymbol::Input(s) if s >= a.alphabet().len() => {
            return Err(AutomatonError::SymbolIndex(s))
        }
        _ => {}
    }
    assert_eq!(t.n, a.num_states(), "tables belong to a different automaton");
    Ok(update_any(a, t, sigma))
}

/// Tables of ⊢w (without the right endmarker).
pub fn tables_of_prefix(a: &TwoWayNfa, w: &[usize]) -> Result<ReachTables, AutomatonError> {
    let mut t = ReachTables::base(a);
    for &x in w {
        t = update_tables(a, &t, TapeSymbol::Input(x))?;
    }
    Ok(t)
}

/// Acceptance decided by folding the table update over ⊢w⊣.
pub fn accepts_via_tables(a: &TwoWayNfa, w: &[usize]) -> Result<bool, AutomatonError> {
    let t = tables_of_prefix(a, w)?;
    let t = update_tables(a, &t, TapeSymbol::RightEnd)?;
    Ok(t.gamma().into_iter().any(|q| a.is_final(q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::oracle::{accepts_2nfa, end_marked_tape, gamma_tau_oracle};

    #[test]
    fn bits_roundtrip() {
        let t = ReachTables::from_masks(3, 0b101, vec![0b010, 0, 0b111]);
        let bits = t.to_bits();
        assert_eq!(bits.len(), 12);
        assert_eq!(&bits[..3], &[true, false, true]);
        assert_eq!(&bits[3..6], &[false, true, false]);
        assert_eq!(ReachTables::from_bits(3, &bits).unwrap(), t);
        assert!(ReachTables::from_bits(3, &bits[1..]).is_none());
    }

    #[test]
    fn no_left_moves_gives_direct_exits() {
        let a = TwoWayNfa::with_states(
            2,
            vec!['a'],
            0,
            &[1],
            [(0, TapeSymbol::Input(0), 1, Dir::R), (1, TapeSymbol::Input(0), 0, Dir::R)],
        )
        .unwrap();
        let t = update_tables(&a, &ReachTables::empty(2), TapeSymbol::Input(0)).unwrap();
        assert_eq!(t.gamma(), Vec::<usize>::new());
        assert_eq!(t.tau(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn left_end_update_is_rejected() {
        let a = TwoWayNfa::with_states(1, vec!['a'], 0, &[0], []).unwrap();
        assert!(update_tables(&a, &ReachTables::empty(1), TapeSymbol::LeftEnd).is_err());
    }

    #[test]
    fn ping_pong_automaton_matches_oracle() {
        // Walks right, bounces off ⊣, walks left to ⊢ and then accepts on a
        // second rightward sweep.
        use TapeSymbol::*;
        let a = TwoWayNfa::with_states(
            3,
            vec!['a'],
            0,
            &[2],
            [
                (0, LeftEnd, 0, Dir::R),
                (0, Input(0), 0, Dir::R),
                (0, RightEnd, 1, Dir::L),
                (1, Input(0), 1, Dir::L),
                (1, LeftEnd, 2, Dir::R),
                (2, Input(0), 2, Dir::R),
                (2, RightEnd, 2, Dir::R),
            ],
        )
        .unwrap();
        for m in 0..5 {
            let w = vec![0; m];
            assert!(accepts_2nfa(&a, &w).unwrap());
            assert!(accepts_via_tables(&a, &w).unwrap());
            let tape = end_marked_tape(&w);
            let mut t = ReachTables::base(&a);
            assert_eq!(t, gamma_tau_oracle(&a, &tape[..1]).unwrap());
            for i in 1..tape.len() {
                t = update_tables(&a, &t, tape[i]).unwrap();
                assert_eq!(t, gamma_tau_oracle(&a, &tape[..=i]).unwrap());
            }
        }
    }
}
