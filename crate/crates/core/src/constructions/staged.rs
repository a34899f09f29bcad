//! Sequential composition of end-marked machines: a small explicit front
//! machine inspects the input and then hands control to one of several
//! sub-machines.
//!
//! A front transition into an *exit* state continues in the chosen
//! sub-machine's state instead. Symbols are kept apart by offsets: ids below
//! `B = 3 + |Σ|` are shared, the front's extra symbols follow, then each
//! sub-machine's extra symbols. A front symbol left on the tape is seen by
//! the sub-machines through an alias (usually the input letter it marks).

use crate::tm::{
    check_end_marked, verify_structure, Action, Dtm, MachineCore, StateId, Sym, TableDtm, FIRST_INPUT,
    LEFT_END, RIGHT_END,
};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct Staged {
    front: TableDtm,
    subs: Vec<Arc<Dtm>>,
    /// Per front state: the sub-machine state it stands for.
    exits: Vec<Option<(usize, StateId)>>,
    /// Per front extra symbol: what the sub-machines read there.
    aliases: Vec<Option<Sym>>,
    b: Sym,
    state_off: Vec<u64>,
    sym_off: Vec<u64>,
    num_states: u64,
    num_symbols: u64,
    /// Rank offset of front symbols (one above every sub-machine rank), if
    /// every part is weight-reducing.
    rank_shift: Option<u64>,
}

impl Staged {
    /// `exits` lists (front state, sub-machine, sub-machine state);
    /// `aliases[i]` is the symbol sub-machines read for front extra symbol
    /// `B + i`.
    pub fn new(
        front: TableDtm,
        subs: Vec<Arc<Dtm>>,
        exits: &[(StateId, usize, StateId)],
        aliases: Vec<Option<Sym>>,
    ) -> Result<Self, String> {
        let b = FIRST_INPUT + front.input().len() as Sym;
        if !front.end_marked() || subs.iter().any(|s| !s.end_marked()) {
            return Err("staged parts must be end-marked".into());
        }
        if subs.iter().any(|s| s.input() != front.input()) {
            return Err("staged parts must share the input alphabet".into());
        }
        if aliases.len() as u64 != front.num_symbols() - b {
            return Err("one alias per front extra symbol".into());
        }
        if aliases.iter().flatten().any(|&a| a >= b) {
            return Err("aliases must be shared symbols".into());
        }
        let mut ex = vec![None; front.num_states() as usize];
        for &(f, i, q) in exits {
            if i >= subs.len() || q >= subs[i].num_states() || f >= front.num_states() {
                return Err(format!("bad exit {f} -> {i}:{q}"));
            }
            ex[f as usize] = Some((i, q));
        }
        if ex[front.initial() as usize].is_some() {
            return Err("the front's initial state cannot be an exit".into());
        }
        let mut state_off = Vec::new();
        let mut sym_off = Vec::new();
        let mut ns = front.num_states();
        let mut nsym = front.num_symbols();
        for s in &subs {
            state_off.push(ns);
            sym_off.push(nsym);
            ns += s.num_states();
            nsym += s.num_symbols() - b;
        }
        let rank_shift = match (front.rank(), subs.iter().map(|s| s.max_rank()).collect::<Option<Vec<_>>>()) {
            (Some(_), Some(r)) => Some(r.into_iter().max().unwrap_or(0) + 1),
            _ => None,
        };
        Ok(Staged {
            front,
            subs,
            exits: ex,
            aliases,
            b,
            state_off,
            sym_off,
            num_states: ns,
            num_symbols: nsym,
            rank_shift,
        })
    }

    pub fn front(&self) -> &TableDtm {
        &self.front
    }

    pub fn subs(&self) -> &[Arc<Dtm>] {
        &self.subs
    }

    fn map_front_state(&self, q: StateId) -> StateId {
        match self.exits[q as usize] {
            Some((i, s)) => self.state_off[i] + s,
            None => q,
        }
    }

    /// (sub-machine, local state) of a staged state, `None` for front states.
    fn locate_state(&self, q: StateId) -> Option<(usize, StateId)> {
        if q < self.front.num_states() {
            return None;
        }
        let i = self.state_off.partition_point(|&o| o <= q) - 1;
        Some((i, q - self.state_off[i]))
    }

    /// Owner of an extra symbol: `None` for shared and front symbols.
    fn locate_sym(&self, s: Sym) -> Option<(usize, Sym)> {
        if s < self.front.num_symbols() {
            return None;
        }
        let i = self.sym_off.partition_point(|&o| o <= s) - 1;
        Some((i, s - self.sym_off[i] + self.b))
    }

    /// What sub-machine `i` reads for staged symbol `s`.
    fn sub_view(&self, i: usize, s: Sym) -> Option<Sym> {
        if s < self.b {
            return Some(s);
        }
        if s < self.front.num_symbols() {
            return self.aliases[(s - self.b) as usize];
        }
        match self.locate_sym(s) {
            Some((j, local)) if j == i => Some(local),
            _ => None,
        }
    }

    fn from_sub(&self, i: usize, s: Sym) -> Sym {
        if s < self.b {
            s
        } else {
            self.sym_off[i] + s - self.b
        }
    }

    /// Checks the declared ranks: the front table and every sub-machine are
    /// weight-reducing, and no sub-machine writes a shared non-endmarker
    /// symbol (which would carry a front rank).
    pub fn verify_structure(&self) -> Result<(), String> {
        if self.rank_shift.is_none() {
            return Err("staged machine has a part without a rank".into());
        }
        verify_structure(&Dtm::Table(self.front.clone())).map_err(|e| format!("front: {e}"))?;
        for (i, s) in self.subs.iter().enumerate() {
            verify_structure(s).map_err(|e| format!("stage {i}: {e}"))?;
            if let Dtm::Table(t) = &**s {
                if let Some((_, sym, a)) = t
                    .transitions()
                    .find(|(_, _, a)| a.write < self.b && a.write != LEFT_END && a.write != RIGHT_END)
                {
                    return Err(format!("stage {i} writes shared symbol {} on {}", a.write, sym));
                }
            }
        }
        Ok(())
    }

    pub fn verify_end_marked(&self) -> Result<(), String> {
        check_end_marked(&Dtm::Table(self.front.clone())).map_err(|e| format!("front: {e}"))?;
        for (i, s) in self.subs.iter().enumerate() {
            check_end_marked(s).map_err(|e| format!("stage {i}: {e}"))?;
        }
        Ok(())
    }
}

impl MachineCore for Staged {
    fn input(&self) -> &[char] {
        self.front.input()
    }
    fn num_states(&self) -> u64 {
        self.num_states
    }
    fn num_symbols(&self) -> u64 {
        self.num_symbols
    }
    fn initial(&self) -> StateId {
        self.front.initial()
    }
    fn is_final(&self, q: StateId) -> bool {
        match self.locate_state(q) {
            None => self.exits[q as usize].is_none() && self.front.is_final(q),
            Some((i, l)) => self.subs[i].is_final(l),
        }
    }
    fn end_marked(&self) -> bool {
        true
    }
    #[inline]
    fn delta(&self, q: StateId, s: Sym) -> Option<Action> {
        match self.locate_state(q) {
            None => {
                if self.exits[q as usize].is_some() || s >= self.front.num_symbols() {
                    return None;
                }
                let a = self.front.delta(q, s)?;
                Some(Action::new(self.map_front_state(a.next), a.write, a.dir))
            }
            Some((i, l)) => {
                let a = self.subs[i].delta(l, self.sub_view(i, s)?)?;
                // A sub-machine overwriting a front mark keeps its own symbol;
                // rewriting a cell it does not change keeps the mark.
                let write = if s >= self.b && s < self.front.num_symbols() && Some(a.write) == self.sub_view(i, s) {
                    s
                } else {
                    self.from_sub(i, a.write)
                };
                Some(Action::new(self.state_off[i] + a.next, write, a.dir))
            }
        }
    }
    fn symbol_name(&self, s: Sym) -> String {
        match self.locate_sym(s) {
            None => self.front.symbol_name(s).to_string(),
            Some((i, l)) => format!("{}@{i}", self.subs[i].symbol_name(l)),
        }
    }
    fn state_name(&self, q: StateId) -> String {
        match self.locate_state(q) {
            None => self.front.state_name(q).to_string(),
            Some((i, l)) => format!("{i}:{}", self.subs[i].state_name(l)),
        }
    }
    fn rank(&self, s: Sym) -> Option<u64> {
        let shift = self.rank_shift?;
        if s == LEFT_END || s == RIGHT_END {
            return Some(0);
        }
        match self.locate_sym(s) {
            None => Some(shift + self.front.rank()?[s as usize]),
            Some((i, l)) => self.subs[i].rank(l),
        }
    }
    fn max_rank(&self) -> Option<u64> {
        let shift = self.rank_shift?;
        let front = self.front.rank()?.iter().copied().max().unwrap_or(0);
        Some(shift + front)
    }
    fn num_transitions(&self) -> u64 {
        self.subs
            .iter()
            .fold(self.front.num_transitions(), |t, s| t.saturating_add(s.num_transitions()))
    }
}
