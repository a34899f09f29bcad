//! The two generic machine transformations: a per-cell visit countdown that
//! turns a visit-bounded machine into a weight-reducing one, and the tape
//! fold that moves a bounded left overhang onto a second track of the input
//! segment.
//!
//! Both are lazy: their alphabets grow with the visit bound (and the fold
//! squares it), so transitions are computed from the base machine on demand.

use crate::tm::{
    check_weight_reducing, run, Action, Dtm, MachineCore, MachineError, Outcome, RunOptions,
    StateId, Sym, WrWitness, BLANK, FIRST_INPUT, LEFT_END, RIGHT_END,
};
use std::sync::Arc;

/// Lemma-style countdown: every cell may be left at most `k` times.
///
/// Symbol ids: ids below `B = 3 + |Σ|` are the base's own pristine symbols
/// (rank `k`); a counted symbol `(a, j)` for `a ∈ [3, S)` and `j ∈ [0, k)`
/// has id `B + (a − 3)·k + j` and rank `j`. Leaving a cell that holds `(a, j)`
/// writes `(a′, j − 1)`; `(a, 0)` has no transition.
#[derive(Clone, Debug)]
pub struct Countdown {
    base: Arc<Dtm>,
    k: u64,
    b: Sym,
    s: u64,
}

impl Countdown {
    pub fn new(base: Arc<Dtm>, k: u64) -> Result<Self, MachineError> {
        if k == 0 {
            return Err(MachineError::Invalid("visit bound must be at least 1".into()));
        }
        let b = FIRST_INPUT + base.input().len() as Sym;
        let s = base.num_symbols();
        (s - FIRST_INPUT)
            .checked_mul(k)
            .and_then(|x| x.checked_add(b))
            .ok_or_else(|| MachineError::Invalid("countdown alphabet overflows".into()))?;
        Ok(Countdown { base, k, b, s })
    }

    pub fn base(&self) -> &Dtm {
        &self.base
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Id of the counted symbol `(a, j)`.
    pub fn counted(&self, a: Sym, j: u64) -> Sym {
        debug_assert!(a >= FIRST_INPUT && a < self.s && j < self.k);
        self.b + (a - FIRST_INPUT) * self.k + j
    }

    /// The base symbol and remaining count carried by `x`; pristine symbols
    /// report `k`.
    pub fn decode(&self, x: Sym) -> (Sym, u64) {
        if x < self.b {
            (x, self.k)
        } else {
            let y = x - self.b;
            (FIRST_INPUT + y / self.k, y % self.k)
        }
    }

    /// The layer condition: pristine symbols become counted ones and counts
    /// strictly decrease, which holds by construction once the base never
    /// writes blanks or endmarkers off the endmarker cells.
    pub fn verify_structure(&self) -> Result<(), String> {
        if let Dtm::Table(t) = &*self.base {
            for (q, s, a) in t.transitions() {
                let on_end = s == LEFT_END || s == RIGHT_END;
                if !on_end && a.write < FIRST_INPUT {
                    return Err(format!(
                        "base transition {} {} writes {} which cannot be counted",
                        t.state_name(q),
                        t.symbol_name(s),
                        t.symbol_name(a.write)
                    ));
                }
            }
            Ok(())
        } else {
            // Lazy bases are themselves built from validated layers.
            Ok(())
        }
    }
}

impl MachineCore for Countdown {
    fn input(&self) -> &[char] {
        self.base.input()
    }
    fn num_states(&self) -> u64 {
        self.base.num_states()
    }
    fn num_symbols(&self) -> u64 {
        self.b + (self.s - FIRST_INPUT) * self.k
    }
    fn initial(&self) -> StateId {
        self.base.initial()
    }
    fn is_final(&self, q: StateId) -> bool {
        self.base.is_final(q)
    }
    fn end_marked(&self) -> bool {
        self.base.end_marked()
    }
    #[inline]
    fn delta(&self, q: StateId, x: Sym) -> Option<Action> {
        if x == LEFT_END || x == RIGHT_END {
            return self.base.delta(q, x);
        }
        let (a, j) = self.decode(x);
        if j == 0 {
            return None;
        }
        let act = self.base.delta(q, a)?;
        if act.write < FIRST_INPUT {
            return None;
        }
        Some(Action {
            write: self.counted(act.write, j - 1),
            ..act
        })
    }
    fn symbol_name(&self, x: Sym) -> String {
        if x < self.b {
            self.base.symbol_name(x)
        } else {
            let (a, j) = self.decode(x);
            format!("{}#{}", self.base.symbol_name(a), j)
        }
    }
    fn state_name(&self, q: StateId) -> String {
        self.base.state_name(q)
    }
    fn rank(&self, x: Sym) -> Option<u64> {
        Some(self.decode(x).1)
    }
    fn max_rank(&self) -> Option<u64> {
        Some(self.k)
    }
    fn num_transitions(&self) -> u64 {
        // Every base transition on a non-endmarker symbol a is replicated
        // once for pristine a (if a < B) and once per count j ≥ 1.
        let mut n = 0u64;
        if let Dtm::Table(t) = &*self.base {
            for (_, s, _) in t.transitions() {
                n += match s {
                    LEFT_END | RIGHT_END => 1,
                    s if s < self.b => self.k,
                    _ => self.k - 1,
                };
            }
            n
        } else {
            self.base.num_transitions().saturating_mul(self.k)
        }
    }
}

/// Tape fold: the left overhang of the base machine (cells −1, −2, …) is
/// stored reversed on a lower track of the input cells 1, 2, … of an
/// end-marked tape. States are `2q + t` with `t = 0` for the upper track and
/// `t = 1` for the lower one; symbols are the base symbols ("singles", whose
/// lower track is blank) and pairs `S + u·S + l`.
#[derive(Clone, Debug)]
pub struct Folded {
    base: Arc<Dtm>,
    c: u64,
    s: u64,
    blank_rank: u64,
}

impl Folded {
    pub fn new(base: Arc<Dtm>, c: u64) -> Result<Self, MachineError> {
        if base.end_marked() {
            return Err(MachineError::Invalid("fold expects a machine that is not end-marked".into()));
        }
        let s = base.num_symbols();
        s.checked_mul(s)
            .and_then(|x| x.checked_add(s))
            .ok_or_else(|| MachineError::Invalid("folded alphabet overflows".into()))?;
        let blank_rank = base.rank(BLANK).unwrap_or(0);
        Ok(Folded { base, c, s, blank_rank })
    }

    pub fn base(&self) -> &Dtm {
        &self.base
    }

    /// Blank cells the fold can hold, i.e. the shortest guaranteed input.
    pub fn capacity(&self) -> u64 {
        self.c
    }

    pub fn pair(&self, upper: Sym, lower: Sym) -> Sym {
        self.s + upper * self.s + lower
    }

    /// (upper, lower) of a non-endmarker symbol.
    pub fn tracks(&self, x: Sym) -> (Sym, Sym) {
        if x < self.s {
            (x, BLANK)
        } else {
            let y = x - self.s;
            (y / self.s, y % self.s)
        }
    }

    pub fn verify_structure(&self) -> Result<(), String> {
        if self.base.max_rank().is_none() {
            return Err("folded machine has no rank".into());
        }
        match check_weight_reducing(&self.base) {
            WrWitness::Valid { .. } => Ok(()),
            WrWitness::Cycle(c) => Err(format!("base machine has rewrite cycle {c:?}")),
            WrWitness::Violation(v) => Err(v),
        }
    }
}

impl MachineCore for Folded {
    fn input(&self) -> &[char] {
        self.base.input()
    }
    fn num_states(&self) -> u64 {
        2 * self.base.num_states()
    }
    fn num_symbols(&self) -> u64 {
        self.s + self.s * self.s
    }
    fn initial(&self) -> StateId {
        // Lower track on ⊢: the bounce flips to the upper track and enters
        // cell 1, where the base machine starts.
        2 * self.base.initial() + 1
    }
    fn is_final(&self, q: StateId) -> bool {
        self.base.is_final(q / 2)
    }
    fn end_marked(&self) -> bool {
        true
    }
    #[inline]
    fn delta(&self, q: StateId, x: Sym) -> Option<Action> {
        let (p, t) = (q / 2, q % 2);
        match x {
            LEFT_END => Some(Action::new(2 * p + (1 - t), LEFT_END, crate::Dir::R)),
            RIGHT_END => None,
            _ => {
                let (u, l) = self.tracks(x);
                let read = if t == 0 { u } else { l };
                let a = self.base.delta(p, read)?;
                let write = if t == 0 { self.pair(a.write, l) } else { self.pair(u, a.write) };
                let dir = if t == 0 { a.dir } else { a.dir.flip() };
                Some(Action::new(2 * a.next + t, write, dir))
            }
        }
    }
    fn symbol_name(&self, x: Sym) -> String {
        if x < self.s {
            self.base.symbol_name(x)
        } else {
            let (u, l) = self.tracks(x);
            format!("({}|{})", self.base.symbol_name(u), self.base.symbol_name(l))
        }
    }
    fn state_name(&self, q: StateId) -> String {
        format!("{}{}", self.base.state_name(q / 2), if q % 2 == 0 { "^" } else { "_" })
    }
    fn rank(&self, x: Sym) -> Option<u64> {
        if x == LEFT_END || x == RIGHT_END {
            return Some(0);
        }
        if x < self.s {
            Some(self.base.rank(x)? + self.blank_rank + 1)
        } else {
            let (u, l) = self.tracks(x);
            Some(self.base.rank(u)? + self.base.rank(l)?)
        }
    }
    fn max_rank(&self) -> Option<u64> {
        Some(2 * self.base.max_rank()? + 1)
    }
    fn num_transitions(&self) -> u64 {
        // Each base transition on σ acts on the upper track of every symbol
        // whose upper component is σ (S + 1 of them: S pairs and the single)
        // and likewise on the lower track; ⊢ bounces in both track modes.
        let t = self.base.num_transitions();
        t.saturating_mul(2 * (self.s + 1)) + 2 * self.base.num_states()
    }
}

/// Lemma pass: wraps `m` in a countdown with bound `k`.
pub fn wr_from_visit_bounded(m: Arc<Dtm>, k: u64) -> Result<Dtm, MachineError> {
    Ok(Dtm::Countdown(Countdown::new(m, k)?))
}

/// Lemma pass: folds the left overhang of the weight-reducing machine `m`
/// (at most `c` initially-blank cells) onto a lower track.
pub fn fold_to_hennie(m: Arc<Dtm>, c: u64) -> Result<Dtm, MachineError> {
    if m.max_rank().is_none() {
        return Err(MachineError::Invalid("fold_to_hennie needs a weight-reducing machine".into()));
    }
    Ok(Dtm::Folded(Folded::new(m, c)?))
}

/// A run that left some cell more often than the claimed bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisitBoundViolation {
    pub input: Vec<usize>,
    pub cell: i64,
    pub visits: u64,
}

/// Runs `m` on each input and returns the first run that exceeds `k`
/// visits on a cell, the certificate that `k` is too small.
pub fn verify_visit_bound(
    m: &Dtm,
    k: u64,
    inputs: &[Vec<usize>],
    budget: Option<u64>,
) -> Result<Option<VisitBoundViolation>, MachineError> {
    for w in inputs {
        let r = run(
            m,
            w,
            RunOptions {
                budget,
                detect_divergence: true,
            },
        )?;
        if r.outcome == Outcome::BudgetExhausted {
            return Err(MachineError::Invalid(format!("run on {w:?} exhausted its budget")));
        }
        let found = r.visits.iter().find(|&(_, v)| v > k);
        if let Some((cell, v)) = found {
            return Ok(Some(VisitBoundViolation {
                input: w.clone(),
                cell,
                visits: v,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::{check_end_marked, input_sym, TableBuilder};
    use crate::Dir;

    /// Over {a}: walks right over the input turning a into x, then halts
    /// accepting on the first blank. Leaves each cell once.
    fn sweeper() -> Dtm {
        let mut b = TableBuilder::new(&['a'], vec!["x".into()], false);
        let q = b.add_state("q", false);
        let f = b.add_state("f", true);
        b.set(q, input_sym(0), Action::new(q, 4, Dir::R));
        b.set(q, BLANK, Action::new(f, 4, Dir::L));
        Dtm::Table(b.build().unwrap())
    }

    /// Writes x on the blank cell left of the input, comes back and accepts.
    fn left_visitor() -> Dtm {
        let mut b = TableBuilder::new(&['a'], vec!["x".into(), "y".into()], false);
        let q0 = b.add_state("q0", false);
        let q1 = b.add_state("q1", false);
        let q2 = b.add_state("q2", true);
        b.set(q0, input_sym(0), Action::new(q1, 4, Dir::L));
        b.set(q1, BLANK, Action::new(q2, 5, Dir::R));
        b.set(q2, 4, Action::new(q2, 5, Dir::R));
        Dtm::Table(b.build().unwrap())
    }

    #[test]
    fn countdown_k1_alphabet_and_behaviour() {
        let m = Arc::new(sweeper());
        let c = Countdown::new(m.clone(), 1).unwrap();
        // S = 5 (blank, ⊢, ⊣, a, x): B + (S−3)·1 = 4 + 2.
        assert_eq!(c.num_symbols(), 6);
        assert!(c.num_symbols() <= 1 * m.num_symbols() + 1 + 2);
        let d = Dtm::Countdown(c);
        assert!(check_weight_reducing(&d).is_valid());
        for len in 0..5 {
            let w = vec![0; len];
            let r0 = run(&*m, &w, RunOptions::with_budget(100)).unwrap();
            let r1 = run(&d, &w, RunOptions::default()).unwrap();
            assert_eq!(r0.outcome, r1.outcome);
            assert_eq!(r0.steps, r1.steps);
        }
    }

    #[test]
    fn countdown_too_small_blocks() {
        // left_visitor leaves cell 0 twice.
        let m = Arc::new(left_visitor());
        let r = run(&*m, &[0], RunOptions::with_budget(100)).unwrap();
        assert_eq!((r.outcome, r.max_visits()), (Outcome::Accepted, 2));
        let d = wr_from_visit_bounded(m.clone(), 2).unwrap();
        assert_eq!(verify_visit_bound(&d, 2, &[vec![0]], None).unwrap(), None);
        assert!(run(&d, &[0], RunOptions::default()).unwrap().accepted());
        // With k = 1 the second departure from cell 0 is blocked and the
        // run stops one step early.
        let d1 = wr_from_visit_bounded(m.clone(), 1).unwrap();
        assert_eq!(run(&d1, &[0], RunOptions::default()).unwrap().steps, 2);
        let viol = verify_visit_bound(&*m, 1, &[vec![0]], Some(100)).unwrap().unwrap();
        assert_eq!((viol.input, viol.cell, viol.visits), (vec![0], 0, 2));
    }

    #[test]
    fn fold_shapes_and_agreement() {
        let m = Arc::new(wr_from_visit_bounded(Arc::new(left_visitor()), 2).unwrap());
        let f = fold_to_hennie(m.clone(), 1).unwrap();
        assert_eq!(f.num_states(), 2 * m.num_states());
        let s = m.num_symbols();
        assert_eq!(f.num_symbols(), s + s * s);
        assert!(check_end_marked(&f).is_ok());
        assert!(check_weight_reducing(&f).is_valid());
        for len in 1..6 {
            let w = vec![0; len];
            let r0 = run(&*m, &w, RunOptions::default()).unwrap();
            let r1 = run(&f, &w, RunOptions::default()).unwrap();
            assert_eq!(r0.outcome, r1.outcome, "len {len}");
            assert_eq!((r1.left_extra, r1.right_extra), (0, 0));
        }
    }

    #[test]
    fn fold_of_segment_bound_machine_is_identity_on_all_inputs() {
        // Accepts a^m for even m and never leaves the input segment: it
        // halts on the first blank, before writing it.
        let mut b = TableBuilder::new(&['a'], vec!["x".into()], false);
        let e = b.add_state("even", true);
        let o = b.add_state("odd", false);
        b.set(e, input_sym(0), Action::new(o, 4, Dir::R));
        b.set(o, input_sym(0), Action::new(e, 4, Dir::R));
        let m = Arc::new(wr_from_visit_bounded(Arc::new(Dtm::Table(b.build().unwrap())), 1).unwrap());
        let f = fold_to_hennie(m.clone(), 0).unwrap();
        for len in 0..7 {
            let w = vec![0; len];
            let r0 = run(&*m, &w, RunOptions::default()).unwrap();
            let r1 = run(&f, &w, RunOptions::default()).unwrap();
            assert_eq!(r0.outcome, r1.outcome, "len {len}");
            assert_eq!(r1.accepted(), len % 2 == 0);
        }
    }
}
