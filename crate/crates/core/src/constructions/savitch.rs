//! Hennie machines that decide reachability in the computation graph by
//! divide and conquer, keeping the recursion stack on a track of the input
//! cells.
//!
//! The machines are given by a transition *function*: a state is a packed
//! register file (mode, current frame, split point, head position, stack
//! pointer, fetch buffer) and a stack cell packs the input letter with `c`
//! activation records. Both spaces are far too large to tabulate but every
//! id is computed arithmetically.
//!
//! Two-way frames are `(p, i, q, j, T, res)` where `res` says which split
//! half of its parent the frame is; one-way frames drop `T`. The split point
//! `(r, ℓ)` of a parent is not stored: it is the target (first half) or the
//! source (second half) of the frame popped above it. Sub-calls that are
//! small enough (`T ≤ 2`, resp. one symbol) are decided in the control by
//! reading at most three adjacent cells, and split points that cannot lie on
//! a path of the required length are skipped.

use crate::automata::{OneWayNfa, TapeSymbol, TwoWayNfa};
use crate::tm::{base_symbols, Action, MachineCore, StateId, Sym, FIRST_INPUT, LEFT_END, RIGHT_END};
use crate::Dir;
use std::sync::Arc;
use strength_reduce::StrengthReducedU64;

#[derive(Clone, Debug)]
enum Source {
    TwoWay(Arc<TwoWayNfa>),
    OneWay(Arc<OneWayNfa>),
}

// Modes of the control.
const ENTER: u64 = 0;
const START_LOOP: u64 = 1;
const NEXT: u64 = 2;
const TRY_A: u64 = 3;
const TRY_B: u64 = 4;
const FETCH_ROOT: u64 = 5;
const FETCH_A: u64 = 6;
const FETCH_B: u64 = 7;
const PUSH_A: u64 = 8;
const PUSH_B: u64 = 9;
const POP_F: u64 = 10;
const POP_T: u64 = 11;
const RET_F: u64 = 12;
const RET_T: u64 = 13;
const DONE_F: u64 = 14;
const DONE_T: u64 = 15;
const MODES: u64 = 16;

const FIRST: u64 = 0;
const SECOND: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
struct Regs {
    mode: u64,
    p: u64,
    i: u64,
    q: u64,
    j: u64,
    t: u64,
    res: u64,
    r: u64,
    l: u64,
    h: u64,
    sp: u64,
    aux: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Frame {
    p: u64,
    i: u64,
    q: u64,
    j: u64,
    t: u64,
    res: u64,
}

/// The divide-and-conquer reachability machine for inputs of one fixed
/// length `m`. It starts on ⊢ and halts accepting iff the root call holds.
#[derive(Clone, Debug)]
pub struct SavitchMachine {
    src: Source,
    input: Vec<char>,
    m: u64,
    n: u64,
    /// Root call bound (`K` for two-way machines).
    root_t: u64,
    target: u64,
    /// Stack capacity in frames and frames per cell.
    depth: u64,
    per_cell: u64,
    /// Distinct activation records plus one for "empty".
    rec_radix: u64,
    cell_radix: u64,
    b: Sym,
    radices: [u64; 12],
    /// Divisors for decoding packed states.
    fast: [StrengthReducedU64; 12],
    /// Place values of the state fields.
    weights: [u64; 12],
    fast_weights: [StrengthReducedU64; 12],
    num_states: u64,
    num_symbols: u64,
}

fn two_way_chain(t: u64) -> u64 {
    if t <= 2 {
        0
    } else {
        1 + two_way_chain(t.div_ceil(2))
    }
}

fn one_way_chain(len: u64) -> u64 {
    if len <= 1 {
        0
    } else {
        1 + one_way_chain(len.div_ceil(2))
    }
}

fn checked_product(xs: &[u64]) -> Option<u64> {
    xs.iter().try_fold(1u64, |a, &x| a.checked_mul(x))
}

impl SavitchMachine {
    /// Machine deciding `reachable(q0, 0, q_f, m+2, K)` for the two-way
    /// automaton `a`, which must have a single final state, on inputs of
    /// length `m`.
    pub fn two_way(a: Arc<TwoWayNfa>, m: usize) -> Result<Self, String> {
        let f = a.unique_final().ok_or("automaton must have a single final state")?;
        let n = a.num_states() as u64;
        let m64 = m as u64;
        let k = n * (m64 + 2) + 1;
        let chain = two_way_chain(k);
        let input = a.alphabet().to_vec();
        Self::assemble(Source::TwoWay(a), input, m64, n, k, f as u64, chain.saturating_sub(1))
    }

    /// Machine deciding `reachableOneWay(q0, 0, q_f, m)` for the one-way
    /// automaton `a`, which must have a single final state, on inputs of
    /// length `m ≥ 1`.
    pub fn one_way(a: Arc<OneWayNfa>, m: usize) -> Result<Self, String> {
        if m == 0 {
            return Err("the one-way machine needs a non-empty input".into());
        }
        let f = match a.finals().as_slice() {
            [f] => *f,
            _ => return Err("automaton must have a single final state".into()),
        };
        let n = a.num_states() as u64;
        let chain = one_way_chain(m as u64);
        let input = a.alphabet().to_vec();
        Self::assemble(Source::OneWay(a), input, m as u64, n, 0, f as u64, chain.saturating_sub(1))
    }

    fn assemble(src: Source, input: Vec<char>, m: u64, n: u64, root_t: u64, target: u64, depth: u64) -> Result<Self, String> {
        let two = matches!(src, Source::TwoWay(_));
        let b = base_symbols(input.len());
        let per_cell = depth.div_ceil(m.max(1)).max(1);
        let (npi, npj, nt, npl, aux) = if two {
            (m + 2, m + 3, root_t + 1, m + 2, 5 * b * b * b)
        } else {
            (m + 1, m + 1, 1, 1, 5 * b)
        };
        let rec = checked_product(&[n, npi, n, npj, nt, 2]).ok_or("record space overflows")?;
        let rec_radix = rec + 1;
        let cell_radix = rec_radix.checked_pow(per_cell as u32).ok_or("cell space overflows")?;
        let num_symbols = cell_radix
            .checked_mul(input.len() as u64)
            .and_then(|x| x.checked_add(b))
            .ok_or("alphabet overflows")?;
        let radices = [MODES, n, npi, n, npj, nt, 2, n, npl, m + 2, depth + 1, aux];
        let num_states = checked_product(&radices).ok_or("state space overflows")?;
        let mut weights = [1u64; 12];
        for k in 1..12 {
            weights[k] = weights[k - 1] * radices[k - 1];
        }
        Ok(SavitchMachine {
            src,
            input,
            m,
            n,
            root_t,
            target,
            depth,
            per_cell,
            rec_radix,
            cell_radix,
            b,
            radices,
            fast: radices.map(StrengthReducedU64::new),
            weights,
            fast_weights: weights.map(StrengthReducedU64::new),
            num_states,
            num_symbols,
        })
    }

    /// Input length this machine is built for.
    pub fn length(&self) -> usize {
        self.m as usize
    }

    /// Stack capacity in activation records.
    pub fn stack_depth(&self) -> u64 {
        self.depth
    }

    /// Activation records per stack cell.
    pub fn records_per_cell(&self) -> u64 {
        self.per_cell
    }

    fn is_two_way(&self) -> bool {
        matches!(self.src, Source::TwoWay(_))
    }

    fn encode(&self, r: &Regs) -> StateId {
        let f = [r.mode, r.p, r.i, r.q, r.j, r.t, r.res, r.r, r.l, r.h, r.sp, r.aux];
        let mut x = 0u64;
        for (v, rad) in f.iter().zip(&self.radices).rev() {
            debug_assert!(v < rad, "register out of range: {r:?}");
            x = x * rad + v;
        }
        x
    }

    fn decode(&self, mut x: StateId) -> Regs {
        let mut f = [0u64; 12];
        for (v, rad) in f.iter_mut().zip(&self.fast) {
            let (d, m) = StrengthReducedU64::div_rem(x, *rad);
            *v = m;
            x = d;
        }
        Regs {
            mode: f[0],
            p: f[1],
            i: f[2],
            q: f[3],
            j: f[4],
            t: f[5],
            res: f[6],
            r: f[7],
            l: f[8],
            h: f[9],
            sp: f[10],
            aux: f[11],
        }
    }

    fn field(&self, q: StateId, k: usize) -> u64 {
        (q / self.fast_weights[k]) % self.fast[k]
    }

    /// Next action when the control is merely walking towards a cell: every
    /// register but the head position stays as it is. `None` when the full
    /// control has to run.
    fn fast_walk(&self, q: StateId, s: Sym) -> Option<Action> {
        let mode = self.field(q, 0);
        let target = match mode {
            PUSH_A | PUSH_B => self.slot_cell(self.field(q, 10)),
            POP_F | POP_T => self.slot_cell(self.field(q, 10).checked_sub(1)?),
            FETCH_ROOT | FETCH_A | FETCH_B if self.is_two_way() => {
                let stage = self.field(q, 11) % 5;
                if stage == 0 {
                    return None;
                }
                let t = self.field(q, 5);
                let (x, t) = match mode {
                    FETCH_ROOT => (self.field(q, 2), t),
                    FETCH_A => (self.field(q, 2), t / 2),
                    _ => (self.field(q, 8), t.div_ceil(2)),
                };
                let (cells, len) = self.fetch_cells(x, 0, t);
                *cells[..len].get(stage as usize - 1)?
            }
            _ => return None,
        };
        let h = self.field(q, 9);
        if h == target {
            return None;
        }
        Some(if target > h {
            Action::new(q + self.weights[9], s, Dir::R)
        } else {
            Action::new(q - self.weights[9], s, Dir::L)
        })
    }

    fn encode_record(&self, fr: &Frame) -> u64 {
        let [_, n, npi, _, npj, nt, ..] = self.radices;
        let _ = n;
        ((((fr.res * nt + fr.t) * npj + fr.j) * self.n + fr.q) * npi + fr.i) * self.n + fr.p
    }

    fn decode_record(&self, mut x: u64) -> Frame {
        let [_, _, npi, _, npj, nt, ..] = self.radices;
        let p = x % self.n;
        x /= self.n;
        let i = x % npi;
        x /= npi;
        let q = x % self.n;
        x /= self.n;
        let j = x % npj;
        x /= npj;
        let t = x % nt;
        x /= nt;
        Frame { p, i, q, j, t, res: x }
    }

    /// Letter (as a plain symbol) and stack contents of a cell symbol.
    fn split_cell(&self, s: Sym) -> (Sym, u64) {
        if s < self.b {
            (s, 0)
        } else {
            let x = s - self.b;
            (FIRST_INPUT + x / self.cell_radix, x % self.cell_radix)
        }
    }

    fn join_cell(&self, letter: Sym, slots: u64) -> Sym {
        if slots == 0 {
            letter
        } else {
            self.b + (letter - FIRST_INPUT) * self.cell_radix + slots
        }
    }

    fn slot_cell(&self, slot: u64) -> u64 {
        1 + slot / self.per_cell
    }

    fn frame(r: &Regs) -> Frame {
        Frame {
            p: r.p,
            i: r.i,
            q: r.q,
            j: r.j,
            t: r.t,
            res: r.res,
        }
    }

    fn set_frame(r: &mut Regs, f: Frame) {
        r.p = f.p;
        r.i = f.i;
        r.q = f.q;
        r.j = f.j;
        r.t = f.t;
        r.res = f.res;
    }

    fn tape_symbol(&self, s: Sym) -> TapeSymbol {
        match s {
            LEFT_END => TapeSymbol::LeftEnd,
            RIGHT_END => TapeSymbol::RightEnd,
            x => TapeSymbol::Input((x - FIRST_INPUT) as usize),
        }
    }

    /// Parameters `(a, x, b, y, t)` of the call decided by a fetch mode.
    fn small_call(&self, r: &Regs, mode: u64) -> (u64, u64, u64, u64, u64) {
        match mode {
            FETCH_ROOT => (r.p, r.i, r.q, r.j, r.t),
            FETCH_A => (r.p, r.i, r.r, self.split_pos(r), r.t / 2),
            _ => (r.r, self.split_pos(r), r.q, r.j, r.t.div_ceil(2)),
        }
    }

    /// Position of the split point: `ℓ` for two-way frames, the midpoint for
    /// one-way frames.
    fn split_pos(&self, r: &Regs) -> u64 {
        if self.is_two_way() {
            r.l
        } else {
            (r.i + r.j) / 2
        }
    }

    /// Cells a small call must read, in visiting order.
    fn fetch_cells(&self, x: u64, y: u64, t: u64) -> ([u64; 3], usize) {
        if !self.is_two_way() {
            return ([y, 0, 0], 1);
        }
        if t <= 1 {
            return ([x, 0, 0], 1);
        }
        let mut v = [0; 3];
        let mut len = 0;
        if x >= 1 {
            v[len] = x - 1;
            len += 1;
        }
        v[len] = x;
        len += 1;
        if x < self.m + 1 {
            v[len] = x + 1;
            len += 1;
        }
        (v, len)
    }

    /// Decides a small call without reading the tape when possible.
    fn quick(&self, a: u64, x: u64, b: u64, y: u64, t: u64) -> Option<bool> {
        if (a, x) == (b, y) {
            return Some(true);
        }
        if self.is_two_way() {
            if t == 0 || x.abs_diff(y) > t || x > self.m + 1 {
                return Some(false);
            }
        } else if y != x + 1 {
            return Some(false);
        }
        None
    }

    /// Decides a small call from the fetched cell symbols.
    fn decide(&self, a: u64, x: u64, b: u64, y: u64, t: u64, cells: &[u64], syms: &[Sym]) -> bool {
        match &self.src {
            Source::OneWay(nfa) => {
                let letter = (syms[0] - FIRST_INPUT) as usize;
                nfa.delta(a as usize, letter).contains(&(b as usize))
            }
            Source::TwoWay(nfa) => {
                let sym_at = |pos: u64| cells.iter().position(|&c| c == pos).map(|k| self.tape_symbol(syms[k]));
                let succ = |s: u64, pos: u64| {
                    let moves = match sym_at(pos) {
                        None => &[][..],
                        Some(ts) => nfa.delta(s as usize, ts),
                    };
                    moves.iter().filter_map(move |&(q, d)| {
                        let np = pos as i64 + d.delta();
                        (np >= 0).then_some((q as u64, np as u64))
                    })
                };
                succ(a, x).any(|e| e == (b, y)) || (t >= 2 && succ(a, x).any(|(s, z)| succ(s, z).any(|e| e == (b, y))))
            }
        }
    }

    /// Whether a split point can lie on a path of the required lengths.
    fn candidate_ok(&self, r: &Regs) -> bool {
        if !self.is_two_way() {
            return true;
        }
        r.l.abs_diff(r.i) <= r.t / 2 && r.j.abs_diff(r.l) <= r.t.div_ceil(2)
    }

    fn first_child(&self, r: &Regs) -> Frame {
        Frame {
            p: r.p,
            i: r.i,
            q: r.r,
            j: self.split_pos(r),
            t: r.t / 2,
            res: FIRST,
        }
    }

    fn second_child(&self, r: &Regs) -> Frame {
        Frame {
            p: r.r,
            i: self.split_pos(r),
            q: r.q,
            j: r.j,
            t: r.t.div_ceil(2),
            res: SECOND,
        }
    }

    /// Whether a frame must be expanded on the stack rather than decided in
    /// the control.
    fn is_big(&self, f: &Frame) -> bool {
        if self.is_two_way() {
            f.t > 2
        } else {
            f.j > f.i + 1
        }
    }

    fn start_fetch(&self, r: &mut Regs, mode: u64) {
        r.mode = mode;
        r.aux = 0;
    }

    /// Runs the control on the scanned symbol until the head must move.
    fn control(&self, mut r: Regs, scanned: Sym) -> Option<Action> {
        let mut cur = scanned;
        loop {
            match r.mode {
                DONE_F | DONE_T => return None,
                ENTER => {
                    let f = Self::frame(&r);
                    if (f.p, f.i) == (f.q, f.j) {
                        r.mode = RET_T;
                    } else if self.is_big(&f) {
                        r.mode = START_LOOP;
                    } else {
                        self.start_fetch(&mut r, FETCH_ROOT);
                    }
                }
                START_LOOP => {
                    r.r = 0;
                    r.l = 0;
                    r.mode = if self.candidate_ok(&r) { TRY_A } else { NEXT };
                }
                NEXT => {
                    let npl = self.radices[8];
                    loop {
                        r.l += 1;
                        if r.l == npl {
                            r.l = 0;
                            r.r += 1;
                        }
                        if r.r == self.n || self.candidate_ok(&r) {
                            break;
                        }
                    }
                    r.mode = if r.r == self.n {
                        r.r = 0;
                        r.l = 0;
                        RET_F
                    } else {
                        TRY_A
                    };
                }
                TRY_A | TRY_B => {
                    let child = if r.mode == TRY_A { self.first_child(&r) } else { self.second_child(&r) };
                    if self.is_big(&child) {
                        r.mode = if r.mode == TRY_A { PUSH_A } else { PUSH_B };
                    } else {
                        let fetch = if r.mode == TRY_A { FETCH_A } else { FETCH_B };
                        self.start_fetch(&mut r, fetch);
                    }
                }
                FETCH_ROOT | FETCH_A | FETCH_B => {
                    let (a, x, b, y, t) = self.small_call(&r, r.mode);
                    // Fetch stage: 0 = not yet checked, otherwise one more
                    // than the number of cells already read.
                    let mut stage = (r.aux % 5) as usize;
                    let verdict = match if stage == 0 { self.quick(a, x, b, y, t) } else { None } {
                        Some(v) => v,
                        None => {
                            let (cells, len) = self.fetch_cells(x, y, t);
                            let cells = &cells[..len];
                            if stage == 0 {
                                stage = 1;
                                r.aux = 1;
                            }
                            let fetched = stage - 1;
                            if fetched < cells.len() {
                                let target = cells[fetched];
                                if r.h != target {
                                    return Some(self.walk(r, cur, target));
                                }
                                let (letter, _) = self.split_cell(cur);
                                r.aux += 1 + 5 * letter * self.b.pow(fetched as u32);
                                if fetched + 1 < cells.len() {
                                    continue;
                                }
                            }
                            let buf = r.aux / 5;
                            let mut syms = [0; 3];
                            for (k, s) in syms.iter_mut().enumerate().take(cells.len()) {
                                *s = (buf / self.b.pow(k as u32)) % self.b;
                            }
                            self.decide(a, x, b, y, t, cells, &syms[..cells.len()])
                        }
                    };
                    let v = verdict;
                    r.aux = 0;
                    r.mode = match (r.mode, v) {
                        (FETCH_ROOT, v) => {
                            if v {
                                RET_T
                            } else {
                                RET_F
                            }
                        }
                        (FETCH_A, true) => TRY_B,
                        (FETCH_B, true) => RET_T,
                        _ => NEXT,
                    };
                }
                PUSH_A | PUSH_B => {
                    let target = self.slot_cell(r.sp);
                    if r.h != target {
                        return Some(self.walk(r, cur, target));
                    }
                    let (letter, slots) = self.split_cell(cur);
                    let k = r.sp % self.per_cell;
                    let weight = self.rec_radix.pow(k as u32);
                    let old = (slots / weight) % self.rec_radix;
                    let rec = self.encode_record(&Self::frame(&r)) + 1;
                    let slots = slots - old * weight + rec * weight;
                    cur = self.join_cell(letter, slots);
                    let child = if r.mode == PUSH_A { self.first_child(&r) } else { self.second_child(&r) };
                    Self::set_frame(&mut r, child);
                    r.sp += 1;
                    r.r = 0;
                    r.l = 0;
                    r.mode = ENTER;
                }
                RET_F | RET_T => {
                    let v = r.mode == RET_T;
                    if r.sp == 0 {
                        r.mode = if v { DONE_T } else { DONE_F };
                        let dir = if r.h == 0 { Dir::R } else { Dir::L };
                        r.h = if dir == Dir::R { r.h + 1 } else { r.h - 1 };
                        return Some(Action::new(self.encode(&r), cur, dir));
                    }
                    r.mode = if v { POP_T } else { POP_F };
                }
                POP_F | POP_T => {
                    let v = r.mode == POP_T;
                    let slot = r.sp - 1;
                    let target = self.slot_cell(slot);
                    if r.h != target {
                        return Some(self.walk(r, cur, target));
                    }
                    let (_, slots) = self.split_cell(cur);
                    let k = slot % self.per_cell;
                    let rec = (slots / self.rec_radix.pow(k as u32)) % self.rec_radix;
                    debug_assert!(rec > 0, "popping an empty slot");
                    let parent = self.decode_record(rec - 1);
                    let child = Self::frame(&r);
                    Self::set_frame(&mut r, parent);
                    r.sp = slot;
                    if child.res == FIRST {
                        r.r = child.q;
                        r.l = if self.is_two_way() { child.j } else { 0 };
                        r.mode = if v { TRY_B } else { NEXT };
                    } else {
                        r.r = child.p;
                        r.l = if self.is_two_way() { child.i } else { 0 };
                        r.mode = if v { RET_T } else { NEXT };
                    }
                }
                _ => unreachable!("invalid mode"),
            }
        }
    }

    fn walk(&self, mut r: Regs, cur: Sym, target: u64) -> Action {
        let dir = if target > r.h { Dir::R } else { Dir::L };
        r.h = if dir == Dir::R { r.h + 1 } else { r.h - 1 };
        Action::new(self.encode(&r), cur, dir)
    }
}

impl MachineCore for SavitchMachine {
    fn input(&self) -> &[char] {
        &self.input
    }
    fn num_states(&self) -> u64 {
        self.num_states
    }
    fn num_symbols(&self) -> u64 {
        self.num_symbols
    }
    fn initial(&self) -> StateId {
        let (p0, j) = match &self.src {
            Source::TwoWay(a) => (a.initial() as u64, self.m + 2),
            Source::OneWay(a) => (a.initial() as u64, self.m),
        };
        self.encode(&Regs {
            mode: ENTER,
            p: p0,
            i: 0,
            q: self.target,
            j,
            t: self.root_t,
            ..Regs::default()
        })
    }
    fn is_final(&self, q: StateId) -> bool {
        self.decode(q).mode == DONE_T
    }
    fn end_marked(&self) -> bool {
        true
    }
    fn delta(&self, q: StateId, s: Sym) -> Option<Action> {
        if q >= self.num_states || s >= self.num_symbols {
            return None;
        }
        // Stack cells only exist between the endmarkers.
        let expected_end = match self.field(q, 9) {
            0 => Some(LEFT_END),
            h if h == self.m + 1 => Some(RIGHT_END),
            _ => None,
        };
        match expected_end {
            Some(e) if s != e => return None,
            None if s == LEFT_END || s == RIGHT_END || s == 0 => return None,
            _ => {}
        }
        if let Some(a) = self.fast_walk(q, s) {
            return Some(a);
        }
        self.control(self.decode(q), s)
    }
    fn symbol_name(&self, s: Sym) -> String {
        match s {
            0 => "_".into(),
            LEFT_END => "<".into(),
            RIGHT_END => ">".into(),
            s if s < self.b => self.input[(s - FIRST_INPUT) as usize].to_string(),
            s => {
                let (letter, slots) = self.split_cell(s);
                format!("({}|{slots})", self.input[(letter - FIRST_INPUT) as usize])
            }
        }
    }
    fn state_name(&self, q: StateId) -> String {
        let r = self.decode(q);
        format!(
            "m{}[{},{},{},{},{},{}]r{},{}h{}s{}x{}",
            r.mode, r.p, r.i, r.q, r.j, r.t, r.res, r.r, r.l, r.h, r.sp, r.aux
        )
    }
    fn rank(&self, _s: Sym) -> Option<u64> {
        None
    }
    fn max_rank(&self) -> Option<u64> {
        None
    }
    fn num_transitions(&self) -> u64 {
        self.num_states.saturating_mul(self.num_symbols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts_1nfa, accepts_2nfa};
    use crate::constructions::reach::{accepts_by_reachable, reachable_one_way_fn};
    use crate::harness::{random_1nfa, random_2nfa, words_of_length, GeneratorSpec};
    use crate::tm::{run, RunOptions};

    #[test]
    fn two_way_machine_matches_reachable() {
        for seed in 0..6 {
            let a = Arc::new(random_2nfa(&GeneratorSpec::new(2, 2, seed).with_density(0.3)).single_final());
            for m in 1..5 {
                let sm = SavitchMachine::two_way(a.clone(), m).unwrap();
                for w in words_of_length(2, m) {
                    let r = run(&sm, &w, RunOptions::with_budget(1 << 32)).unwrap();
                    let want = accepts_by_reachable(&a, &w).unwrap();
                    assert_eq!(want, accepts_2nfa(&a, &w).unwrap());
                    assert_eq!(r.accepted(), want, "seed {seed} w {w:?}");
                    assert_eq!(r.left_extra + r.right_extra, 0);
                }
            }
        }
    }

    #[test]
    fn one_way_machine_matches_reachable() {
        for seed in 0..6 {
            let a = Arc::new(random_1nfa(&GeneratorSpec::new(3, 2, seed).with_density(0.4)).single_final());
            let f = a.finals()[0];
            for m in 1..7 {
                let sm = SavitchMachine::one_way(a.clone(), m).unwrap();
                for w in words_of_length(2, m) {
                    let r = run(&sm, &w, RunOptions::with_budget(1 << 32)).unwrap();
                    let want = reachable_one_way_fn(&a, &w, a.initial(), 0, f, m);
                    assert_eq!(want, accepts_1nfa(&a, &w).unwrap());
                    assert_eq!(r.accepted(), want, "seed {seed} w {w:?}");
                }
            }
        }
    }

    #[test]
    fn stack_fits_the_input() {
        let a = Arc::new(random_2nfa(&GeneratorSpec::new(3, 2, 1)).single_final());
        for m in 1..9 {
            let sm = SavitchMachine::two_way(a.clone(), m).unwrap();
            assert!(sm.stack_depth() <= sm.records_per_cell() * m as u64);
        }
    }
}
