use super::symbols::*;
use super::MachineError;
use crate::Dir;
use rustc_hash::FxHashSet;

/// A machine given by an explicit transition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDtm {
    input: Vec<char>,
    symbol_names: Vec<String>,
    state_names: Vec<String>,
    initial: u32,
    finals: Vec<bool>,
    end_marked: bool,
    /// Packed entries indexed by `state * num_symbols + symbol`; 0 = undefined.
    table: Vec<u64>,
    rank: Option<Vec<u64>>,
    /// Free-form per-state annotations (e.g. the IR node a state came from).
    notes: Vec<String>,
}

const DIR_BIT: u64 = 1;
const WRITE_SHIFT: u32 = 1;
const WRITE_BITS: u32 = 31;
const NEXT_SHIFT: u32 = WRITE_SHIFT + WRITE_BITS;

fn pack(a: Action) -> u64 {
    debug_assert!(a.write < (1 << WRITE_BITS) && a.next < (1 << 31));
    ((a.next + 1) << NEXT_SHIFT) | (a.write << WRITE_SHIFT) | (a.dir == Dir::R) as u64 * DIR_BIT
}

fn unpack(x: u64) -> Option<Action> {
    if x == 0 {
        return None;
    }
    Some(Action {
        next: (x >> NEXT_SHIFT) - 1,
        write: (x >> WRITE_SHIFT) & ((1 << WRITE_BITS) - 1),
        dir: if x & DIR_BIT == 1 { Dir::R } else { Dir::L },
    })
}

/// Mutable form used while a table is being assembled.
#[derive(Clone, Debug)]
pub struct TableBuilder {
    pub input: Vec<char>,
    pub symbol_names: Vec<String>,
    pub state_names: Vec<String>,
    pub initial: u32,
    pub finals: Vec<bool>,
    pub end_marked: bool,
    pub rank: Option<Vec<u64>>,
    pub notes: Vec<String>,
    table: Vec<u64>,
}

impl TableBuilder {
    /// A builder over the base symbols plus `extra_symbols`, with no states.
    pub fn new(input: &[char], extra_symbols: Vec<String>, end_marked: bool) -> Self {
        let mut symbol_names = base_symbol_names(input);
        symbol_names.extend(extra_symbols);
        TableBuilder {
            input: input.to_vec(),
            symbol_names,
            state_names: Vec::new(),
            initial: 0,
            finals: Vec::new(),
            end_marked,
            rank: None,
            notes: Vec::new(),
            table: Vec::new(),
        }
    }

    pub fn num_symbols(&self) -> usize {
        self.symbol_names.len()
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn add_state(&mut self, name: impl Into<String>, is_final: bool) -> StateId {
        let id = self.state_names.len() as StateId;
        self.state_names.push(name.into());
        self.finals.push(is_final);
        self.notes.push(String::new());
        self.table
            .extend(std::iter::repeat_n(0, self.symbol_names.len()));
        id
    }

    pub fn set_final(&mut self, q: StateId, is_final: bool) {
        self.finals[q as usize] = is_final;
    }

    pub fn set(&mut self, q: StateId, s: Sym, a: Action) {
        let w = self.symbol_names.len();
        self.table[q as usize * w + s as usize] = pack(a);
    }

    pub fn get(&self, q: StateId, s: Sym) -> Option<Action> {
        let w = self.symbol_names.len();
        unpack(self.table[q as usize * w + s as usize])
    }

    pub fn build(self) -> Result<TableDtm, MachineError> {
        let m = TableDtm {
            input: self.input,
            symbol_names: self.symbol_names,
            state_names: self.state_names,
            initial: self.initial,
            finals: self.finals,
            end_marked: self.end_marked,
            table: self.table,
            rank: self.rank,
            notes: self.notes,
        };
        m.validate()?;
        Ok(m)
    }
}

impl TableDtm {
    fn validate(&self) -> Result<(), MachineError> {
        let w = self.symbol_names.len();
        if self.state_names.is_empty() {
            return Err(MachineError::Invalid("machine has no states".into()));
        }
        if self.initial as usize >= self.state_names.len() {
            return Err(MachineError::Invalid("initial state out of range".into()));
        }
        if w >= 1 << WRITE_BITS || self.state_names.len() >= 1 << 31 {
            return Err(MachineError::Invalid("table too large".into()));
        }
        if self.symbol_names.len() < base_symbols(self.input.len()) as usize {
            return Err(MachineError::Invalid("missing base symbols".into()));
        }
        let mut seen = FxHashSet::default();
        for s in &self.symbol_names {
            if !seen.insert(s.as_str()) {
                return Err(MachineError::Invalid(format!("duplicate symbol name {s}")));
            }
        }
        seen.clear();
        for s in &self.state_names {
            if !seen.insert(s.as_str()) {
                return Err(MachineError::Invalid(format!("duplicate state name {s}")));
            }
        }
        if let Some(r) = &self.rank {
            if r.len() != w {
                return Err(MachineError::Invalid("rank table has wrong length".into()));
            }
        }
        for q in 0..self.state_names.len() {
            for s in 0..w {
                let Some(a) = unpack(self.table[q * w + s]) else {
                    continue;
                };
                let here = || format!("{} {}", self.state_names[q], self.symbol_names[s]);
                if a.next as usize >= self.state_names.len() || a.write as usize >= w {
                    return Err(MachineError::Invalid(format!("transition {} out of range", here())));
                }
                if a.write == BLANK {
                    return Err(MachineError::WritesBlank(here()));
                }
                if self.end_marked {
                    let s = s as Sym;
                    let ok = match s {
                        LEFT_END => a.write == LEFT_END && a.dir == Dir::R,
                        RIGHT_END => a.write == RIGHT_END && a.dir == Dir::L,
                        _ => !is_endmarker(a.write),
                    };
                    if !ok {
                        return Err(MachineError::EndmarkerViolation(here()));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn delta(&self, q: StateId, s: Sym) -> Option<Action> {
        let w = self.symbol_names.len() as u64;
        if s >= w {
            return None;
        }
        unpack(self.table[(q * w + s) as usize])
    }

    pub fn input(&self) -> &[char] {
        &self.input
    }
    pub fn num_states(&self) -> u64 {
        self.state_names.len() as u64
    }
    pub fn num_symbols(&self) -> u64 {
        self.symbol_names.len() as u64
    }
    pub fn initial(&self) -> StateId {
        self.initial as StateId
    }
    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q as usize]
    }
    pub fn end_marked(&self) -> bool {
        self.end_marked
    }
    pub fn symbol_name(&self, s: Sym) -> &str {
        &self.symbol_names[s as usize]
    }
    pub fn symbol_names(&self) -> &[String] {
        &self.symbol_names
    }
    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q as usize]
    }
    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }
    pub fn note(&self, q: StateId) -> &str {
        &self.notes[q as usize]
    }
    pub fn rank(&self) -> Option<&[u64]> {
        self.rank.as_deref()
    }
    pub fn with_rank(mut self, rank: Option<Vec<u64>>) -> Result<Self, MachineError> {
        self.rank = rank;
        self.validate()?;
        Ok(self)
    }
    pub fn num_transitions(&self) -> u64 {
        self.table.iter().filter(|&&x| x != 0).count() as u64
    }

    /// All defined transitions in (state, symbol) order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Sym, Action)> + '_ {
        let w = self.symbol_names.len();
        self.table.iter().enumerate().filter_map(move |(i, &x)| {
            unpack(x).map(|a| ((i / w) as StateId, (i % w) as Sym, a))
        })
    }

    pub fn into_builder(self) -> TableBuilder {
        TableBuilder {
            input: self.input,
            symbol_names: self.symbol_names,
            state_names: self.state_names,
            initial: self.initial,
            finals: self.finals,
            end_marked: self.end_marked,
            rank: self.rank,
            notes: self.notes,
            table: self.table,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_roundtrip() {
        for a in [
            Action::new(0, 1, Dir::L),
            Action::new(12345, 77, Dir::R),
            Action::new((1 << 31) - 2, (1 << 31) - 1, Dir::L),
        ] {
            assert_eq!(unpack(pack(a)), Some(a));
        }
        assert_eq!(unpack(0), None);
    }

    #[test]
    fn blank_writes_rejected() {
        let mut b = TableBuilder::new(&['a'], vec![], false);
        let q = b.add_state("q", false);
        b.set(q, input_sym(0), Action::new(q, BLANK, Dir::R));
        assert!(matches!(b.build(), Err(MachineError::WritesBlank(_))));
    }

    #[test]
    fn endmarker_discipline_enforced() {
        let mut b = TableBuilder::new(&['a'], vec![], true);
        let q = b.add_state("q", false);
        b.set(q, RIGHT_END, Action::new(q, RIGHT_END, Dir::R));
        assert!(matches!(b.build(), Err(MachineError::EndmarkerViolation(_))));
        let mut b = TableBuilder::new(&['a'], vec![], true);
        let q = b.add_state("q", false);
        b.set(q, input_sym(0), Action::new(q, LEFT_END, Dir::R));
        assert!(matches!(b.build(), Err(MachineError::EndmarkerViolation(_))));
    }
}
