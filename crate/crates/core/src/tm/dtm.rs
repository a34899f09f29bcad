use super::symbols::*;
use super::table::{TableBuilder, TableDtm};
use super::MachineError;
use crate::builder::{Countdown, Folded};
use crate::constructions::{SavitchMachine, Staged};
use rustc_hash::FxHashMap;
use std::collections::VecDeque;

/// Interface shared by every machine representation.
///
/// Explicit tables are one implementation. The others compute transitions
/// arithmetically from a base machine (the lemma passes) or from a compact
/// state encoding (the stack-based constructions). Their alphabets can be far
/// too large to tabulate.
pub trait MachineCore {
    fn input(&self) -> &[char];
    fn num_states(&self) -> u64;
    fn num_symbols(&self) -> u64;
    fn initial(&self) -> StateId;
    fn is_final(&self, q: StateId) -> bool;
    fn end_marked(&self) -> bool;
    fn delta(&self, q: StateId, s: Sym) -> Option<Action>;
    fn symbol_name(&self, s: Sym) -> String;
    fn state_name(&self, q: StateId) -> String {
        format!("s{q}")
    }
    /// The declared weight-reducing rank of `s`, if the machine claims one.
    fn rank(&self, s: Sym) -> Option<u64>;
    fn max_rank(&self) -> Option<u64>;
    fn num_transitions(&self) -> u64;
}

/// A deterministic one-tape Turing machine in one of its representations.
#[derive(Clone, Debug)]
pub enum Dtm {
    Table(TableDtm),
    Countdown(Countdown),
    Folded(Folded),
    Staged(Staged),
    Savitch(SavitchMachine),
}

macro_rules! each {
    ($self:expr, $m:ident => $e:expr) => {
        match $self {
            Dtm::Table($m) => $e,
            Dtm::Countdown($m) => $e,
            Dtm::Folded($m) => $e,
            Dtm::Staged($m) => $e,
            Dtm::Savitch($m) => $e,
        }
    };
}

impl MachineCore for TableDtm {
    fn input(&self) -> &[char] {
        TableDtm::input(self)
    }
    fn num_states(&self) -> u64 {
        TableDtm::num_states(self)
    }
    fn num_symbols(&self) -> u64 {
        TableDtm::num_symbols(self)
    }
    fn initial(&self) -> StateId {
        TableDtm::initial(self)
    }
    fn is_final(&self, q: StateId) -> bool {
        TableDtm::is_final(self, q)
    }
    fn end_marked(&self) -> bool {
        TableDtm::end_marked(self)
    }
    #[inline]
    fn delta(&self, q: StateId, s: Sym) -> Option<Action> {
        TableDtm::delta(self, q, s)
    }
    fn symbol_name(&self, s: Sym) -> String {
        TableDtm::symbol_name(self, s).to_string()
    }
    fn state_name(&self, q: StateId) -> String {
        TableDtm::state_name(self, q).to_string()
    }
    fn rank(&self, s: Sym) -> Option<u64> {
        TableDtm::rank(self).map(|r| r[s as usize])
    }
    fn max_rank(&self) -> Option<u64> {
        TableDtm::rank(self).map(|r| r.iter().copied().max().unwrap_or(0))
    }
    fn num_transitions(&self) -> u64 {
        TableDtm::num_transitions(self)
    }
}

impl MachineCore for Dtm {
    fn input(&self) -> &[char] {
        each!(self, m => m.input())
    }
    fn num_states(&self) -> u64 {
        each!(self, m => MachineCore::num_states(m))
    }
    fn num_symbols(&self) -> u64 {
        each!(self, m => MachineCore::num_symbols(m))
    }
    fn initial(&self) -> StateId {
        each!(self, m => MachineCore::initial(m))
    }
    fn is_final(&self, q: StateId) -> bool {
        each!(self, m => MachineCore::is_final(m, q))
    }
    fn end_marked(&self) -> bool {
        each!(self, m => MachineCore::end_marked(m))
    }
    #[inline]
    fn delta(&self, q: StateId, s: Sym) -> Option<Action> {
        each!(self, m => MachineCore::delta(m, q, s))
    }
    fn symbol_name(&self, s: Sym) -> String {
        each!(self, m => MachineCore::symbol_name(m, s))
    }
    fn state_name(&self, q: StateId) -> String {
        each!(self, m => MachineCore::state_name(m, q))
    }
    fn rank(&self, s: Sym) -> Option<u64> {
        each!(self, m => MachineCore::rank(m, s))
    }
    fn max_rank(&self) -> Option<u64> {
        each!(self, m => MachineCore::max_rank(m))
    }
    fn num_transitions(&self) -> u64 {
        each!(self, m => MachineCore::num_transitions(m))
    }
}

/// Size figures of a machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeReport {
    pub states: u64,
    pub work_symbols: u64,
    pub transitions: u64,
    pub size_metric: u128,
}

/// |Q|·|Γ|·⌈log₂(|Q|·|Γ|)⌉.
pub fn size_metric(states: u64, symbols: u64) -> u128 {
    let p = states as u128 * symbols as u128;
    let log = if p <= 1 { 0 } else { 128 - (p - 1).leading_zeros() as u128 };
    p * log
}

impl Dtm {
    pub fn size_report(&self) -> SizeReport {
        let states = self.num_states();
        let work_symbols = self.num_symbols();
        SizeReport {
            states,
            work_symbols,
            transitions: self.num_transitions(),
            size_metric: size_metric(states, work_symbols),
        }
    }

    pub fn as_table(&self) -> Option<&TableDtm> {
        match self {
            Dtm::Table(t) => Some(t),
            _ => None,
        }
    }

    /// Whether the machine declares a weight-reducing rank.
    pub fn claims_weight_reducing(&self) -> bool {
        self.max_rank().is_some()
    }

    /// Tabulates the part of the machine reachable from its initial state.
    /// Fails if the table would exceed `max_entries` (states × symbols).
    pub fn materialize(&self, max_entries: u64) -> Result<TableDtm, MachineError> {
        if let Dtm::Table(t) = self {
            return Ok(t.clone());
        }
        let syms = self.num_symbols();
        let mut ids: FxHashMap<StateId, StateId> = FxHashMap::default();
        let mut order = vec![self.initial()];
        ids.insert(self.initial(), 0);
        let mut queue = VecDeque::from([self.initial()]);
        let mut rows: Vec<Vec<(Sym, Action)>> = Vec::new();
        while let Some(q) = queue.pop_front() {
            if (order.len() as u64).saturating_mul(syms) > max_entries {
                return Err(MachineError::TooLarge {
                    entries: (order.len() as u64).saturating_mul(syms),
                    limit: max_entries,
                });
            }
            let mut row = Vec::new();
            for s in 0..syms {
                if let Some(a) = self.delta(q, s) {
                    let next = *ids.entry(a.next).or_insert_with(|| {
                        order.push(a.next);
                        queue.push_back(a.next);
                        order.len() as StateId - 1
                    });
                    row.push((s, Action { next, ..a }));
                }
            }
            rows.push(row);
        }
        let base = base_symbols(self.input().len());
        let extra = (base..syms).map(|s| self.symbol_name(s)).collect();
        let mut b = TableBuilder::new(self.input(), extra, self.end_marked());
        for &q in &order {
            b.add_state(self.state_name(q), self.is_final(q));
        }
        for (i, row) in rows.into_iter().enumerate() {
            for (s, a) in row {
                b.set(i as StateId, s, a);
            }
        }
        if self.claims_weight_reducing() {
            b.rank = Some((0..syms).map(|s| self.rank(s).unwrap_or(0)).collect());
        }
        b.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_formula() {
        assert_eq!(size_metric(2, 4), 24);
        assert_eq!(size_metric(1, 1), 0);
        assert_eq!(size_metric(3, 3), 9 * 4);
    }
}
