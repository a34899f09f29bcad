//! Flattening of the program tree into straight-line instructions, and the
//! compiler from instructions to a transition table.
//!
//! Compiled control states are triples (program point, head offset,
//! environment). They are discovered by breadth-first search from the start.
//! After each step the control is advanced through every instruction that
//! does not touch the tape, so states sit only at tape-reading points.

use super::ir::{Expr, Node, Pred, Program, SymClass, Var};
use crate::tm::{
    base_symbols, Action, MachineError, StateId, Sym, TableBuilder, TableDtm, BLANK, LEFT_END,
    RIGHT_END,
};
use crate::Dir;
use rustc_hash::FxHashMap;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("move to cell {cell} outside segment [{lo}, {hi}] at {node}")]
    OutOfSegment { cell: i64, lo: i64, hi: i64, node: String },
    #[error("variable {var} takes value {value} outside its range at {node}")]
    VarRange { var: String, value: i64, node: String },
    #[error("control loops without touching the tape at {0}")]
    PureLoop(String),
    #[error("environment space too large to encode")]
    EnvTooLarge,
    #[error("compiled machine exceeds {0} states")]
    TooManyStates(usize),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Flat instructions.
#[derive(Clone, Debug)]
pub enum Instr {
    Move(Expr),
    BranchBit { track: usize, t: usize, f: usize },
    /// Unmatched classes reject.
    BranchSym(Vec<(SymClass, usize)>),
    BranchCond { pred: Pred, t: usize, f: usize },
    WriteBit { track: usize, value: bool },
    WriteSym(Sym),
    Set { var: Var, value: Expr },
    Jump(usize),
    Halt(bool),
    Shift(i64),
}

/// A flattened program: instructions with the IR path each came from.
#[derive(Clone, Debug)]
pub struct Flat {
    pub code: Vec<Instr>,
    pub origin: Vec<String>,
}

struct Flattener {
    code: Vec<Instr>,
    origin: Vec<String>,
    path: Vec<String>,
}

impl Flattener {
    fn here(&self) -> usize {
        self.code.len()
    }

    fn emit(&mut self, i: Instr, what: &str) -> usize {
        self.code.push(i);
        let mut p = self.path.join("/");
        if !what.is_empty() {
            if !p.is_empty() {
                p.push('/');
            }
            p.push_str(what);
        }
        self.origin.push(p);
        self.code.len() - 1
    }

    fn patch_target(&mut self, at: usize, to: usize) {
        match &mut self.code[at] {
            Instr::Jump(x) => *x = to,
            _ => unreachable!(),
        }
    }

    fn node(&mut self, n: &Node) {
        match n {
            Node::Seq(v) => v.iter().for_each(|x| self.node(x)),
            Node::MoveTo(e) => {
                self.emit(Instr::Move(e.clone()), "move");
            }
            Node::ReadBit { track, then, els } => {
                let br = self.emit(Instr::BranchBit { track: *track, t: 0, f: 0 }, "read");
                let t = self.here();
                self.node(then);
                let j = self.emit(Instr::Jump(0), "");
                let f = self.here();
                self.node(els);
                let end = self.here();
                self.code[br] = Instr::BranchBit { track: *track, t, f };
                self.patch_target(j, end);
            }
            Node::WriteBit { track, value } => {
                self.emit(Instr::WriteBit { track: *track, value: *value }, "write");
            }
            Node::WriteSymbol(s) => {
                self.emit(Instr::WriteSym(*s), "write");
            }
            Node::MatchSymbol(arms) => {
                let br = self.emit(Instr::BranchSym(Vec::new()), "match");
                let mut targets = Vec::new();
                let mut jumps = Vec::new();
                for (c, body) in arms {
                    targets.push((*c, self.here()));
                    self.node(body);
                    jumps.push(self.emit(Instr::Jump(0), ""));
                }
                let end = self.here();
                for j in jumps {
                    self.patch_target(j, end);
                }
                self.code[br] = Instr::BranchSym(targets);
            }
            Node::ForStateIndex { var, bound, body } => {
                let v = *var;
                let b = *bound;
                self.emit(Instr::Set { var: v, value: Expr::Const(0) }, "for");
                let head = self.emit(
                    Instr::BranchCond {
                        pred: Pred::new(format!("v{v}<{b}"), vec![v], move |e| e[v] < b),
                        t: 0,
                        f: 0,
                    },
                    "for",
                );
                let body_start = self.here();
                self.node(body);
                self.emit(
                    Instr::Set {
                        var: v,
                        value: Expr::Var(v) + Expr::Const(1),
                    },
                    "for",
                );
                self.emit(Instr::Jump(head), "for");
                let exit = self.emit(Instr::Set { var: v, value: Expr::Const(0) }, "for");
                if let Instr::BranchCond { t, f, .. } = &mut self.code[head] {
                    *t = body_start;
                    *f = exit;
                }
            }
            Node::IfTransition { cond, then, els } => {
                self.cond_branch(cond.clone(), then, els);
            }
            Node::SetFlag { var, value } => {
                self.emit(
                    Instr::Set {
                        var: *var,
                        value: Expr::Const(*value),
                    },
                    "set",
                );
            }
            Node::TestFlag { var, then, els } => {
                let v = *var;
                self.cond_branch(Pred::new(format!("v{v}"), vec![v], move |e| e[v] != 0), then, els);
            }
            Node::RepeatWhileFlag { flag, body, .. } => {
                let v = *flag;
                let top = self.emit(Instr::Set { var: v, value: Expr::Const(0) }, "repeat");
                self.node(body);
                let br = self.emit(
                    Instr::BranchCond {
                        pred: Pred::new(format!("v{v}"), vec![v], move |e| e[v] != 0),
                        t: top,
                        f: 0,
                    },
                    "repeat",
                );
                let exit = self.here();
                if let Instr::BranchCond { f, .. } = &mut self.code[br] {
                    *f = exit;
                }
            }
            Node::Call { label, body } => {
                self.path.push(label.clone());
                self.node(body);
                self.path.pop();
            }
            Node::Forever(body) => {
                let top = self.here();
                self.node(body);
                self.emit(Instr::Jump(top), "loop");
            }
            Node::ShiftWindow(d) => {
                self.emit(Instr::Shift(*d), "shift");
            }
            Node::Accept => {
                self.emit(Instr::Halt(true), "accept");
            }
            Node::Reject => {
                self.emit(Instr::Halt(false), "reject");
            }
        }
    }

    fn cond_branch(&mut self, pred: Pred, then: &Node, els: &Node) {
        let br = self.emit(Instr::BranchCond { pred: pred.clone(), t: 0, f: 0 }, "if");
        let t = self.here();
        self.node(then);
        let j = self.emit(Instr::Jump(0), "");
        let f = self.here();
        self.node(els);
        let end = self.here();
        if let Instr::BranchCond { t: tt, f: ff, .. } = &mut self.code[br] {
            *tt = t;
            *ff = f;
        }
        self.patch_target(j, end);
    }
}

/// Flattens a program tree. The code ends with an implicit reject.
pub fn flatten(p: &Program) -> Flat {
    let mut fl = Flattener {
        code: Vec::new(),
        origin: Vec::new(),
        path: vec![p.name.clone()],
    };
    fl.node(&p.body);
    fl.emit(Instr::Halt(false), "end");
    Flat {
        code: fl.code,
        origin: fl.origin,
    }
}

/// Limits for [`compile`].
#[derive(Clone, Copy, Debug)]
pub struct CompileOptions {
    pub max_states: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { max_states: 20_000_000 }
    }
}

/// Compiled machine plus the flat code its states refer to.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub machine: TableDtm,
    /// Program point of each state (sinks map to `usize::MAX`).
    pub source_map: Vec<usize>,
    pub flat: Flat,
}

/// The value of a cell as the program sees it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Cell {
    Plain(Sym),
    Comp(u64),
}

pub(crate) struct Codec {
    pub base: Sym,
    pub input_proj: Vec<u64>,
}

impl Codec {
    pub fn new(p: &Program) -> Self {
        Codec {
            base: base_symbols(p.input.len()),
            input_proj: p.tracks.input_proj.clone(),
        }
    }
    pub fn decode(&self, s: Sym) -> Cell {
        if s < self.base {
            Cell::Plain(s)
        } else {
            Cell::Comp(s - self.base)
        }
    }
    pub fn encode(&self, c: Cell) -> Sym {
        match c {
            Cell::Plain(s) => s,
            Cell::Comp(x) => self.base + x,
        }
    }
    /// Symbol left behind when the head departs: blanks become the zero
    /// composite since blanks cannot be written.
    pub fn departing(&self, c: Cell) -> Sym {
        match c {
            Cell::Plain(BLANK) => self.base,
            c => self.encode(c),
        }
    }
    /// Track bits of a cell, `None` on endmarkers.
    pub fn bits(&self, c: Cell) -> Option<u64> {
        match c {
            Cell::Plain(BLANK) => Some(0),
            Cell::Plain(LEFT_END) | Cell::Plain(RIGHT_END) => None,
            Cell::Plain(s) => Some(self.input_proj[(s - 3) as usize]),
            Cell::Comp(x) => Some(x),
        }
    }
    pub fn class_matches(&self, class: SymClass, c: Cell) -> bool {
        match (class, c) {
            (SymClass::Blank, Cell::Plain(BLANK)) => true,
            (SymClass::LeftEnd, Cell::Plain(LEFT_END)) => true,
            (SymClass::RightEnd, Cell::Plain(RIGHT_END)) => true,
            (SymClass::Input(i), Cell::Plain(s)) => s >= 3 && s - 3 == i as Sym,
            (SymClass::Composite, Cell::Comp(_)) => true,
            _ => false,
        }
    }
}

struct EnvCodec {
    sizes: Vec<i64>,
}

impl EnvCodec {
    fn new(p: &Program) -> Result<Self, CompileError> {
        let mut total: u64 = 1;
        for v in &p.vars {
            total = total.checked_mul(v.size.max(1) as u64).ok_or(CompileError::EnvTooLarge)?;
        }
        Ok(EnvCodec {
            sizes: p.vars.iter().map(|v| v.size).collect(),
        })
    }
    fn encode(&self, env: &[i64]) -> u64 {
        let mut x = 0u64;
        for (v, s) in env.iter().zip(&self.sizes).rev() {
            x = x * (*s as u64) + *v as u64;
        }
        x
    }
    fn decode(&self, mut x: u64, env: &mut [i64]) {
        for (v, s) in env.iter_mut().zip(&self.sizes) {
            *v = (x % *s as u64) as i64;
            x /= *s as u64;
        }
    }
}

type Key = (u32, i64, u64);

enum Res {
    Step(Key, Action),
    Halt { accept: bool, write: Option<Sym> },
}

struct Ctx<'a> {
    p: &'a Program,
    flat: &'a Flat,
    codec: Codec,
    envc: EnvCodec,
}

const PURE_LIMIT: usize = 50_000_000;

impl Ctx<'_> {
    fn check_env(&self, env: &[i64], pc: usize) -> Result<(), CompileError> {
        for (i, (&v, d)) in env.iter().zip(&self.p.vars).enumerate() {
            if v < 0 || v >= d.size {
                let _ = i;
                return Err(CompileError::VarRange {
                    var: d.name.clone(),
                    value: v,
                    node: self.flat.origin[pc].clone(),
                });
            }
        }
        Ok(())
    }

    fn check_cell(&self, cell: i64, pc: usize) -> Result<(), CompileError> {
        let (lo, hi) = self.p.segment;
        if cell < lo || cell > hi {
            return Err(CompileError::OutOfSegment {
                cell,
                lo,
                hi,
                node: self.flat.origin[pc].clone(),
            });
        }
        Ok(())
    }

    /// Advances through tape-independent instructions.
    fn canonical(&self, mut pc: usize, mut head: i64, env: &mut [i64]) -> Result<Key, CompileError> {
        let mut n = 0usize;
        loop {
            n += 1;
            if n > PURE_LIMIT {
                return Err(CompileError::PureLoop(self.flat.origin[pc].clone()));
            }
            match &self.flat.code[pc] {
                Instr::Set { var, value } => {
                    env[*var] = value.eval(env);
                    pc += 1;
                }
                Instr::Jump(t) => pc = *t,
                Instr::BranchCond { pred, t, f } => pc = if pred.eval(env) { *t } else { *f },
                Instr::Shift(d) => {
                    head -= d;
                    self.check_cell(head, pc)?;
                    pc += 1;
                }
                Instr::Move(e) => {
                    let target = e.eval(env);
                    self.check_cell(target, pc)?;
                    if target == head {
                        pc += 1;
                    } else {
                        break;
                    }
                }
                _ => break,
            }
        }
        // Loop counters may pass through their bound between states; only
        // values stored in a state must be in range.
        self.check_env(env, pc)?;
        Ok((pc as u32, head, self.envc.encode(env)))
    }

    /// Runs from a canonical key with `sym` under the head until the first
    /// step or halt.
    fn exec(&self, key: Key, sym: Sym) -> Result<Res, CompileError> {
        let (pc0, mut head, code) = key;
        let mut pc = pc0 as usize;
        let mut env = vec![0i64; self.p.vars.len()];
        self.envc.decode(code, &mut env);
        let orig = self.codec.decode(sym);
        let mut cell = orig;
        let reject = |cell: Cell| Res::Halt {
            accept: false,
            write: (cell != orig).then(|| self.codec.departing(cell)),
        };
        let mut n = 0usize;
        loop {
            n += 1;
            if n > PURE_LIMIT {
                return Err(CompileError::PureLoop(self.flat.origin[pc].clone()));
            }
            match &self.flat.code[pc] {
                Instr::Move(e) => {
                    let target = e.eval(&env);
                    self.check_cell(target, pc)?;
                    if target == head {
                        pc += 1;
                        continue;
                    }
                    let dir = if target > head { Dir::R } else { Dir::L };
                    // The endmarkers may only be left inward.
                    match (orig, dir) {
                        (Cell::Plain(LEFT_END), Dir::L) | (Cell::Plain(RIGHT_END), Dir::R) => {
                            return Ok(reject(cell))
                        }
                        _ => {}
                    }
                    let nh = head + dir.delta();
                    let next = self.canonical(pc, nh, &mut env)?;
                    return Ok(Res::Step(
                        next,
                        Action::new(0, self.codec.departing(cell), dir),
                    ));
                }
                Instr::BranchBit { track, t, f } => match self.codec.bits(cell) {
                    None => return Ok(reject(cell)),
                    Some(b) => pc = if (b >> track) & 1 == 1 { *t } else { *f },
                },
                Instr::BranchSym(arms) => {
                    match arms.iter().find(|(c, _)| self.codec.class_matches(*c, cell)) {
                        Some((_, t)) => pc = *t,
                        None => return Ok(reject(cell)),
                    }
                }
                Instr::BranchCond { pred, t, f } => pc = if pred.eval(&env) { *t } else { *f },
                Instr::WriteBit { track, value } => match self.codec.bits(cell) {
                    None => return Ok(reject(cell)),
                    Some(b) => {
                        let m = 1u64 << track;
                        cell = Cell::Comp(if *value { b | m } else { b & !m });
                        pc += 1;
                    }
                },
                Instr::WriteSym(s) => {
                    if matches!(cell, Cell::Plain(LEFT_END) | Cell::Plain(RIGHT_END)) {
                        return Ok(reject(cell));
                    }
                    cell = self.codec.decode(*s);
                    pc += 1;
                }
                Instr::Set { var, value } => {
                    env[*var] = value.eval(&env);
                    pc += 1;
                }
                Instr::Jump(t) => pc = *t,
                Instr::Halt(a) => {
                    return Ok(Res::Halt {
                        accept: *a,
                        write: (cell != orig).then(|| self.codec.departing(cell)),
                    })
                }
                Instr::Shift(d) => {
                    // The physical cell stays put (with any pending write);
                    // only its coordinate changes.
                    head -= d;
                    self.check_cell(head, pc)?;
                    pc += 1;
                }
            }
        }
    }
}

/// Compiles a program into an explicit transition table.
pub fn compile(p: &Program, opts: CompileOptions) -> Result<Compiled, CompileError> {
    let flat = flatten(p);
    let ctx = Ctx {
        p,
        codec: Codec::new(p),
        envc: EnvCodec::new(p)?,
        flat: &flat,
    };
    let base = ctx.codec.base;
    let num_symbols = base + p.tracks.num_composites();
    // Symbols the head can meet: no blanks inside an end-marked tape, no
    // endmarkers elsewhere.
    let readable: Vec<Sym> = (0..num_symbols)
        .filter(|&s| {
            if p.end_marked {
                s != BLANK
            } else {
                s != LEFT_END && s != RIGHT_END
            }
        })
        .collect();

    let mut env = p.initial_env();
    ctx.check_cell(p.start, 0)?;
    let start = ctx.canonical(0, p.start, &mut env)?;
    let mut ids: FxHashMap<Key, StateId> = FxHashMap::default();
    let mut keys: Vec<Key> = vec![start];
    ids.insert(start, 0);
    let mut queue = VecDeque::from([start]);
    // Per state: finality and transitions; sinks are patched in at the end.
    const ACC_SINK: StateId = StateId::MAX;
    const REJ_SINK: StateId = StateId::MAX - 1;
    let mut rows: Vec<(bool, Vec<(Sym, Action)>)> = Vec::new();
    let mut halts: Vec<(Sym, bool, Option<Sym>)> = Vec::new();
    while let Some(key) = queue.pop_front() {
        let mut trans = Vec::new();
        halts.clear();
        for &s in &readable {
            match ctx.exec(key, s)? {
                Res::Step(next, a) => {
                    let id = match ids.get(&next) {
                        Some(&id) => id,
                        None => {
                            let id = keys.len() as StateId;
                            if keys.len() >= opts.max_states {
                                return Err(CompileError::TooManyStates(opts.max_states));
                            }
                            keys.push(next);
                            ids.insert(next, id);
                            queue.push_back(next);
                            id
                        }
                    };
                    trans.push((s, Action { next: id, ..a }));
                }
                Res::Halt { accept, write } => halts.push((s, accept, write)),
            }
        }
        let in_place: Vec<bool> = halts.iter().filter(|h| h.2.is_none()).map(|h| h.1).collect();
        let is_final = in_place.iter().any(|&a| a);
        for &(s, accept, write) in &halts {
            let needs_sink = write.is_some() || (is_final && !accept);
            if !needs_sink {
                continue;
            }
            let w = write.unwrap_or_else(|| ctx.codec.departing(ctx.codec.decode(s)));
            let dir = if s == LEFT_END { Dir::R } else { Dir::L };
            let sink = if accept { ACC_SINK } else { REJ_SINK };
            trans.push((s, Action::new(sink, w, dir)));
        }
        rows.push((is_final, trans));
    }

    let extra: Vec<String> = (0..p.tracks.num_composites())
        .map(|c| p.tracks.composite_name(c))
        .collect();
    let mut b = TableBuilder::new(&p.input, extra, p.end_marked);
    let mut source_map = Vec::with_capacity(rows.len() + 2);
    for (i, (fin, _)) in rows.iter().enumerate() {
        let id = b.add_state(format!("q{i}"), *fin);
        let pc = keys[i].0 as usize;
        b.notes[id as usize] = format!("{} @{}", flat.origin[pc], keys[i].1);
        source_map.push(pc);
    }
    let uses = |sink: StateId| rows.iter().any(|(_, t)| t.iter().any(|(_, a)| a.next == sink));
    let acc = if uses(ACC_SINK) {
        source_map.push(usize::MAX);
        Some(b.add_state("acc", true))
    } else {
        None
    };
    let rej = if uses(REJ_SINK) {
        source_map.push(usize::MAX);
        Some(b.add_state("rej", false))
    } else {
        None
    };
    for (i, (_, trans)) in rows.into_iter().enumerate() {
        for (s, mut a) in trans {
            if a.next == ACC_SINK {
                a.next = acc.unwrap();
            } else if a.next == REJ_SINK {
                a.next = rej.unwrap();
            }
            b.set(i as StateId, s, a);
        }
    }
    Ok(Compiled {
        machine: b.build()?,
        source_map,
        flat,
    })
}
