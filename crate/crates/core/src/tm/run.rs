use super::dtm::MachineCore;
use super::symbols::*;
use super::MachineError;
use rustc_hash::FxHashMap;
use std::collections::BTreeMap;

/// How a run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Accepted,
    RejectedHalt,
    DivergedDetected,
    BudgetExhausted,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Accepted => "accepted",
            Outcome::RejectedHalt => "rejected_halt",
            Outcome::DivergedDetected => "diverged_detected",
            Outcome::BudgetExhausted => "budget_exhausted",
        }
    }

    /// `Some(verdict)` for halting runs, `None` for inconclusive ones.
    pub fn verdict(self) -> Option<bool> {
        match self {
            Outcome::Accepted => Some(true),
            Outcome::RejectedHalt => Some(false),
            Outcome::DivergedDetected => Some(false),
            Outcome::BudgetExhausted => None,
        }
    }
}

/// Per-cell visit counts; a visit is one step executed on the cell.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VisitProfile {
    /// Cell index of `counts[0]`.
    pub offset: i64,
    pub counts: Vec<u64>,
}

impl VisitProfile {
    pub fn max(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
    pub fn get(&self, cell: i64) -> u64 {
        let i = cell - self.offset;
        if i < 0 {
            return 0;
        }
        self.counts.get(i as usize).copied().unwrap_or(0)
    }
    /// Non-zero entries as (cell, visits).
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (self.offset + i as i64, c))
    }
    /// CSV with header `cell_index,visits`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("cell_index,visits\n");
        for (c, v) in self.iter() {
            s.push_str(&format!("{c},{v}\n"));
        }
        s
    }
}

/// Evidence that a run never halts: the configuration at step `second`
/// repeats the one at step `first` shifted by `shift` cells outward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceCertificate {
    pub state: StateId,
    pub first: u64,
    pub second: u64,
    pub shift: i64,
    pub window: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub outcome: Outcome,
    pub steps: u64,
    pub visits: VisitProfile,
    pub left_extra: u64,
    pub right_extra: u64,
    pub final_state: StateId,
    pub final_head: i64,
    pub divergence: Option<DivergenceCertificate>,
}

impl RunResult {
    pub fn accepted(&self) -> bool {
        self.outcome == Outcome::Accepted
    }
    pub fn max_visits(&self) -> u64 {
        self.visits.max()
    }
}

/// Options of [`run`].
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Step budget; `None` means the default for weight-reducing machines.
    pub budget: Option<u64>,
    /// Run the frontier divergence detector.
    pub detect_divergence: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            budget: None,
            detect_divergence: true,
        }
    }
}

impl RunOptions {
    pub fn with_budget(budget: u64) -> Self {
        RunOptions {
            budget: Some(budget),
            ..Self::default()
        }
    }
}

/// Multiplier in the default budget, overridable through the environment
/// variable `HENNIE_BUDGET_MULTIPLIER`.
pub fn budget_multiplier() -> u64 {
    std::env::var("HENNIE_BUDGET_MULTIPLIER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(64)
}

/// 64·(max rank + 2)·(|w| + |Γ| + |Q| + 4) for machines with a rank.
pub fn default_budget<M: MachineCore + ?Sized>(m: &M, input_len: usize) -> Option<u64> {
    let r = m.max_rank()?;
    Some(
        budget_multiplier()
            .saturating_mul(r.saturating_add(2))
            .saturating_mul(
                (input_len as u64)
                    .saturating_add(m.num_symbols())
                    .saturating_add(m.num_states())
                    .saturating_add(4),
            ),
    )
}

/// Dense bi-infinite tape with visit counters.
#[derive(Clone, Debug)]
pub struct Tape {
    cells: Vec<Sym>,
    visits: Vec<u64>,
    origin: i64,
}

impl Tape {
    pub fn new(contents: &[Sym], start: i64) -> Self {
        let pad = 16;
        let mut cells = vec![BLANK; contents.len() + 2 * pad];
        cells[pad..pad + contents.len()].copy_from_slice(contents);
        let visits = vec![0; cells.len()];
        Tape {
            cells,
            visits,
            origin: pad as i64 - start,
        }
    }

    #[inline]
    fn index(&mut self, pos: i64) -> usize {
        let mut i = pos + self.origin;
        if i < 0 {
            let grow = (self.cells.len()).max((-i) as usize + 16);
            let mut c = vec![BLANK; grow];
            c.extend_from_slice(&self.cells);
            self.cells = c;
            let mut v = vec![0; grow];
            v.extend_from_slice(&self.visits);
            self.visits = v;
            self.origin += grow as i64;
            i += grow as i64;
        } else if i as usize >= self.cells.len() {
            let grow = self.cells.len().max(i as usize - self.cells.len() + 16);
            self.cells.resize(self.cells.len() + grow, BLANK);
            self.visits.resize(self.cells.len(), 0);
        }
        i as usize
    }

    #[inline]
    pub fn get(&self, pos: i64) -> Sym {
        let i = pos + self.origin;
        if i < 0 || i as usize >= self.cells.len() {
            BLANK
        } else {
            self.cells[i as usize]
        }
    }

    /// Writes `s` and counts a visit at `pos`.
    #[inline]
    fn write_visit(&mut self, pos: i64, s: Sym) {
        let i = self.index(pos);
        self.cells[i] = s;
        self.visits[i] += 1;
    }

    /// Non-blank cells as a map.
    pub fn contents(&self) -> BTreeMap<i64, Sym> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != BLANK)
            .map(|(i, &s)| (i as i64 - self.origin, s))
            .collect()
    }

    fn profile(&self) -> VisitProfile {
        let first = self.visits.iter().position(|&v| v > 0);
        let last = self.visits.iter().rposition(|&v| v > 0);
        match (first, last) {
            (Some(f), Some(l)) => VisitProfile {
                offset: f as i64 - self.origin,
                counts: self.visits[f..=l].to_vec(),
            },
            _ => VisitProfile::default(),
        }
    }
}

/// Window (in cells) compared by the divergence detector.
const LASSO_WINDOW: usize = 64;

struct RecordEvent {
    step: u64,
    pos: i64,
    /// Head position closest to the tape interior between the previous
    /// record on this side and this one.
    inner_since_prev: i64,
    /// Cells `pos-W..pos` (right side) or `pos+1..=pos+W` (left side),
    /// listed from the frontier inward.
    snapshot: Vec<Sym>,
}

/// Frontier-lasso detector: fires when the head reaches a fresh outermost
/// cell in some state, it previously reached a fresh outermost cell on the
/// same side in the same state, and the tape region read in between is
/// identical relative to the head. The computation then repeats shifted
/// outward forever.
struct Side {
    sign: i64,
    events: Vec<RecordEvent>,
    last_by_state: FxHashMap<StateId, usize>,
    inner: i64,
}

impl Side {
    fn new(sign: i64) -> Self {
        Side {
            sign,
            events: Vec::new(),
            last_by_state: FxHashMap::default(),
            inner: i64::MAX,
        }
    }

    /// Tracks the innermost head position (relative: `-sign*pos` maximal).
    #[inline]
    fn observe(&mut self, pos: i64) {
        let rel = -self.sign * pos;
        if self.inner == i64::MAX || rel > self.inner {
            self.inner = rel;
        }
    }

    fn record(&mut self, tape: &Tape, state: StateId, step: u64, pos: i64) -> Option<DivergenceCertificate> {
        let snapshot: Vec<Sym> = (1..=LASSO_WINDOW as i64)
            .map(|d| tape.get(pos - self.sign * d))
            .collect();
        let inner = if self.inner == i64::MAX { -self.sign * pos } else { self.inner };
        self.events.push(RecordEvent {
            step,
            pos,
            inner_since_prev: inner,
            snapshot,
        });
        self.inner = -self.sign * pos;
        let idx = self.events.len() - 1;
        let found = self.last_by_state.get(&state).copied();
        self.last_by_state.insert(state, idx);
        let prev = found?;
        let e1 = &self.events[prev];
        let e2 = &self.events[idx];
        let shift = (e2.pos - e1.pos) * self.sign;
        if shift <= 0 || shift as usize > LASSO_WINDOW {
            return None;
        }
        // Deepest excursion towards the interior between the two records.
        let deepest = self.events[prev + 1..=idx]
            .iter()
            .map(|e| e.inner_since_prev)
            .max()
            .unwrap();
        let depth = deepest - (-self.sign * e1.pos);
        if depth < 0 || depth as usize >= LASSO_WINDOW {
            return None;
        }
        let d = depth as usize;
        if e1.snapshot[..d] == e2.snapshot[..d] {
            Some(DivergenceCertificate {
                state,
                first: e1.step,
                second: e2.step,
                shift: e2.pos - e1.pos,
                window: d,
            })
        } else {
            None
        }
    }
}

/// Initial tape and head for input `w` (symbol indices).
pub fn initial_tape(end_marked: bool, w: &[usize]) -> (Vec<Sym>, i64) {
    let mut t = Vec::with_capacity(w.len() + 2);
    if end_marked {
        t.push(LEFT_END);
    }
    t.extend(w.iter().map(|&a| input_sym(a)));
    if end_marked {
        t.push(RIGHT_END);
    }
    (t, 0)
}

/// Runs `m` on `w`. Machines without a rank need an explicit budget.
pub fn run<M: MachineCore + ?Sized>(m: &M, w: &[usize], opts: RunOptions) -> Result<RunResult, MachineError> {
    run_with_tape(m, w, opts).map(|(r, _)| r)
}

/// [`run`] that also returns the final tape.
pub fn run_with_tape<M: MachineCore + ?Sized>(
    m: &M,
    w: &[usize],
    opts: RunOptions,
) -> Result<(RunResult, Tape), MachineError> {
    if let Some(&a) = w.iter().find(|&&a| a >= m.input().len()) {
        return Err(MachineError::InputSymbol(a));
    }
    let budget = match opts.budget {
        Some(b) => b,
        None => default_budget(m, w.len()).ok_or(MachineError::BudgetRequired)?,
    };
    let end_marked = m.end_marked();
    let (contents, _) = initial_tape(end_marked, w);
    let mut tape = Tape::new(&contents, 0);
    let mut head: i64 = 0;
    let mut state = m.initial();
    let mut steps = 0u64;
    // Known region: the input segment plus every cell the head has been on.
    let mut lo: i64 = 0;
    let mut hi: i64 = (contents.len() as i64 - 1).max(0);
    let detect = opts.detect_divergence && !end_marked;
    let mut right = Side::new(1);
    let mut left = Side::new(-1);
    let mut divergence = None;
    let outcome = loop {
        let s = tape.get(head);
        let Some(a) = m.delta(state, s) else {
            break if m.is_final(state) {
                Outcome::Accepted
            } else {
                Outcome::RejectedHalt
            };
        };
        if steps >= budget {
            break Outcome::BudgetExhausted;
        }
        tape.write_visit(head, a.write);
        steps += 1;
        head += a.dir.delta();
        state = a.next;
        if detect {
            right.observe(head);
            left.observe(head);
            if head > hi {
                hi = head;
                if let Some(c) = right.record(&tape, state, steps, head) {
                    divergence = Some(c);
                    break Outcome::DivergedDetected;
                }
            } else if head < lo {
                lo = head;
                if let Some(c) = left.record(&tape, state, steps, head) {
                    divergence = Some(c);
                    break Outcome::DivergedDetected;
                }
            }
        }
    };
    let visits = tape.profile();
    let (left_extra, right_extra) = if visits.counts.is_empty() {
        (0, 0)
    } else {
        let first = visits.offset;
        let last = visits.offset + visits.counts.len() as i64 - 1;
        // The cell under the initial head belongs to the initial segment
        // even when the input is empty.
        let seg_end = (contents.len() as i64 - 1).max(0);
        ((-first).max(0) as u64, (last - seg_end).max(0) as u64)
    };
    Ok((
        RunResult {
            outcome,
            steps,
            visits,
            left_extra,
            right_extra,
            final_state: state,
            final_head: head,
            divergence,
        },
        tape,
    ))
}

/// A configuration with a sparse tape, for single-stepping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmConfiguration {
    pub state: StateId,
    pub tape: BTreeMap<i64, Sym>,
    pub head: i64,
}

impl TmConfiguration {
    pub fn initial<M: MachineCore + ?Sized>(m: &M, w: &[usize]) -> Self {
        let (contents, head) = initial_tape(m.end_marked(), w);
        TmConfiguration {
            state: m.initial(),
            tape: contents
                .into_iter()
                .enumerate()
                .filter(|(_, s)| *s != BLANK)
                .map(|(i, s)| (i as i64, s))
                .collect(),
            head,
        }
    }
}

/// Applies one transition; `None` when the machine halts.
pub fn step<M: MachineCore + ?Sized>(m: &M, c: &TmConfiguration) -> Option<TmConfiguration> {
    let s = c.tape.get(&c.head).copied().unwrap_or(BLANK);
    let a = m.delta(c.state, s)?;
    let mut next = c.clone();
    next.tape.insert(c.head, a.write);
    next.head += a.dir.delta();
    next.state = a.next;
    Some(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::{Dtm, TableBuilder};
    use crate::Dir;

    fn single_state(is_final: bool) -> Dtm {
        let mut b = TableBuilder::new(&['a'], vec![], false);
        b.add_state("q0", is_final);
        b.rank = Some(vec![0; 4]);
        Dtm::Table(b.build().unwrap())
    }

    #[test]
    fn no_transitions() {
        let acc = run(&single_state(true), &[0, 0], RunOptions::default()).unwrap();
        assert_eq!((acc.outcome, acc.steps), (Outcome::Accepted, 0));
        let rej = run(&single_state(false), &[0], RunOptions::default()).unwrap();
        assert_eq!((rej.outcome, rej.steps), (Outcome::RejectedHalt, 0));
    }

    #[test]
    fn budget_required_without_rank() {
        let mut b = TableBuilder::new(&['a'], vec![], false);
        b.add_state("q0", true);
        let m = Dtm::Table(b.build().unwrap());
        assert!(matches!(run(&m, &[], RunOptions::default()), Err(MachineError::BudgetRequired)));
        assert!(run(&m, &[], RunOptions::with_budget(10)).is_ok());
    }

    #[test]
    fn single_step() {
        let mut b = TableBuilder::new(&['a'], vec!["b".into()], false);
        let q0 = b.add_state("q0", false);
        let q1 = b.add_state("q1", true);
        b.set(q0, input_sym(0), Action::new(q1, 4, Dir::R));
        let m = Dtm::Table(b.build().unwrap());
        let c = TmConfiguration::initial(&m, &[0]);
        let c1 = step(&m, &c).unwrap();
        assert_eq!(c1.state, q1);
        assert_eq!(c1.tape.get(&0), Some(&4));
        assert_eq!(c1.head, 1);
        assert!(step(&m, &c1).is_none());
    }

    #[test]
    fn period_one_lasso_detected() {
        let mut b = TableBuilder::new(&['a'], vec!["x".into()], false);
        let q = b.add_state("q", false);
        b.set(q, BLANK, Action::new(q, 4, Dir::R));
        let m = Dtm::Table(b.build().unwrap());
        let r = run(&m, &[], RunOptions::with_budget(1000)).unwrap();
        assert_eq!(r.outcome, Outcome::DivergedDetected);
        assert!(r.steps <= 3, "fired after {} steps", r.steps);
        // Without the detector the budget stops it.
        let r = run(
            &m,
            &[],
            RunOptions {
                budget: Some(1000),
                detect_divergence: false,
            },
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::BudgetExhausted);
        assert_eq!(r.steps, 1000);
    }

    #[test]
    fn zigzag_growth_is_not_a_lasso() {
        // Walks right writing x, then returns to the far left each time it
        // hits a blank: its future keeps depending on the whole tape, and
        // the sweeps grow, so no window-bounded repetition exists.
        let mut b = TableBuilder::new(&['a'], vec!["x".into(), "y".into()], false);
        let r = b.add_state("right", false);
        let l = b.add_state("left", false);
        b.set(r, 4, Action::new(r, 4, Dir::R));
        b.set(r, BLANK, Action::new(l, 4, Dir::L));
        b.set(l, 4, Action::new(l, 4, Dir::L));
        b.set(l, BLANK, Action::new(r, 5, Dir::R));
        b.set(r, 5, Action::new(r, 5, Dir::R));
        b.set(l, 5, Action::new(l, 5, Dir::L));
        let m = Dtm::Table(b.build().unwrap());
        let r = run(&m, &[], RunOptions::with_budget(20_000)).unwrap();
        assert_eq!(r.outcome, Outcome::BudgetExhausted);
    }

    #[test]
    fn steps_equal_total_visits() {
        let mut b = TableBuilder::new(&['a'], vec!["x".into()], false);
        let q = b.add_state("q", false);
        let h = b.add_state("h", true);
        b.set(q, input_sym(0), Action::new(q, 4, Dir::R));
        b.set(q, BLANK, Action::new(h, 4, Dir::L));
        let m = Dtm::Table(b.build().unwrap());
        let r = run(&m, &[0, 0, 0], RunOptions::with_budget(100)).unwrap();
        assert_eq!(r.outcome, Outcome::Accepted);
        assert_eq!(r.steps, 4);
        assert_eq!(r.visits.total(), r.steps);
        assert_eq!((r.left_extra, r.right_extra), (0, 1));
    }
}
