//! Constructions addressable by name.

use super::census::{build_1nfa_to_dhm, build_2nfa_to_dhm};
use super::one_way::build_1nfa_to_wrdhm_long;
use super::sliding::{build_2nfa_to_wrdhm_long, build_2nfa_to_wrdtm, sliding_machine};
use super::unary::build_unary_2nfa_to_wrdhm;
use super::update::WindowKind;
use super::ConstructionError;
use crate::automata::{OneWayNfa, TwoWayNfa};
use crate::builder::{fold_to_hennie, wr_from_visit_bounded};
use crate::tm::Dtm;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// An automaton of either kind.
#[derive(Clone, Debug)]
pub enum Automaton {
    OneWay(OneWayNfa),
    TwoWay(TwoWayNfa),
}

impl Automaton {
    pub fn kind(&self) -> &'static str {
        match self {
            Automaton::OneWay(_) => "1nfa",
            Automaton::TwoWay(_) => "2nfa",
        }
    }

    pub fn num_states(&self) -> usize {
        match self {
            Automaton::OneWay(a) => a.num_states(),
            Automaton::TwoWay(a) => a.num_states(),
        }
    }

    pub fn alphabet(&self) -> &[char] {
        match self {
            Automaton::OneWay(a) => a.alphabet(),
            Automaton::TwoWay(a) => a.alphabet(),
        }
    }

    /// Membership by the brute-force oracle of the automaton's kind.
    pub fn accepts(&self, w: &[usize]) -> Result<bool, crate::automata::AutomatonError> {
        match self {
            Automaton::OneWay(a) => crate::automata::accepts_1nfa(a, w),
            Automaton::TwoWay(a) => crate::automata::accepts_2nfa(a, w),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Construction {
    TwoWayWrdtm,
    TwoWayWrdhmLong,
    UnaryWrdhm,
    TwoWayDhm,
    OneWayWrdhmLong,
    OneWayDhm,
    LemmaWr,
    LemmaFold,
}

/// Which inputs a construction's output is guaranteed to decide correctly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guarantee {
    All,
    /// Inputs of at least this length.
    AtLeast(usize),
}

impl Guarantee {
    pub fn covers(self, len: usize) -> bool {
        match self {
            Guarantee::All => true,
            Guarantee::AtLeast(m) => len >= m,
        }
    }
}

impl Construction {
    pub const ALL: [Construction; 8] = [
        Construction::TwoWayWrdtm,
        Construction::TwoWayWrdhmLong,
        Construction::UnaryWrdhm,
        Construction::TwoWayDhm,
        Construction::OneWayWrdhmLong,
        Construction::OneWayDhm,
        Construction::LemmaWr,
        Construction::LemmaFold,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::TwoWayWrdtm => "2nfa-wrdtm",
            Construction::TwoWayWrdhmLong => "2nfa-wrdhm-long",
            Construction::UnaryWrdhm => "u2nfa-wrdhm",
            Construction::TwoWayDhm => "2nfa-dhm",
            Construction::OneWayWrdhmLong => "1nfa-wrdhm-long",
            Construction::OneWayDhm => "1nfa-dhm",
            Construction::LemmaWr => "lemma-wr",
            Construction::LemmaFold => "lemma-fold",
        }
    }

    /// Whether the construction transforms a machine rather than an
    /// automaton.
    pub fn is_pass(self) -> bool {
        matches!(self, Construction::LemmaWr | Construction::LemmaFold)
    }

    /// Domain on which the output of the construction agrees with an
    /// automaton with `n` states.
    pub fn guarantee(self, n: usize) -> Guarantee {
        match self {
            Construction::TwoWayWrdhmLong => Guarantee::AtLeast(n * n),
            Construction::OneWayWrdhmLong => Guarantee::AtLeast(n),
            _ => Guarantee::All,
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = ConstructionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConstructionError::Domain(format!("unknown construction `{s}`")))
    }
}

/// Runs an automaton construction. With `skip_wr_pass`, `2nfa-wrdtm`
/// returns the visit-bounded table before the weight-reducing pass.
pub fn build(c: Construction, a: &Automaton, skip_wr_pass: bool) -> Result<Dtm, ConstructionError> {
    if skip_wr_pass && c != Construction::TwoWayWrdtm {
        return Err(ConstructionError::Domain(format!("{c} has no separable weight-reducing pass")));
    }
    let mismatch = || ConstructionError::Domain(format!("{c} does not apply to a {} automaton", a.kind()));
    match (c, a) {
        (Construction::TwoWayWrdtm, Automaton::TwoWay(a)) => {
            if skip_wr_pass {
                Ok(Dtm::Table(sliding_machine(a, WindowKind::Wide)?.machine))
            } else {
                build_2nfa_to_wrdtm(a)
            }
        }
        (Construction::TwoWayWrdhmLong, Automaton::TwoWay(a)) => build_2nfa_to_wrdhm_long(a),
        (Construction::UnaryWrdhm, Automaton::TwoWay(a)) => build_unary_2nfa_to_wrdhm(a),
        (Construction::TwoWayDhm, Automaton::TwoWay(a)) => build_2nfa_to_dhm(a),
        (Construction::OneWayWrdhmLong, Automaton::OneWay(a)) => build_1nfa_to_wrdhm_long(a),
        (Construction::OneWayDhm, Automaton::OneWay(a)) => build_1nfa_to_dhm(a),
        (c, _) if c.is_pass() => Err(ConstructionError::Domain(format!("{c} takes a machine, not an automaton"))),
        _ => Err(mismatch()),
    }
}

/// Runs a standalone lemma pass on a machine: `lemma-wr` with the visit
/// bound `param`, `lemma-fold` with the overhang bound `param`.
pub fn apply_pass(c: Construction, m: Dtm, param: u64) -> Result<Dtm, ConstructionError> {
    match c {
        Construction::LemmaWr => Ok(wr_from_visit_bounded(Arc::new(m), param)?),
        Construction::LemmaFold => Ok(fold_to_hennie(Arc::new(m), param)?),
        _ => Err(ConstructionError::Domain(format!("{c} is not a machine pass"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{random_1nfa, random_2nfa, GeneratorSpec};

    #[test]
    fn names_round_trip() {
        for c in Construction::ALL {
            assert_eq!(c.name().parse::<Construction>().unwrap(), c);
        }
        assert!("nope".parse::<Construction>().is_err());
    }

    #[test]
    fn kind_mismatch_is_a_domain_error() {
        let one = Automaton::OneWay(random_1nfa(&GeneratorSpec::new(2, 2, 0)));
        let two = Automaton::TwoWay(random_2nfa(&GeneratorSpec::new(2, 2, 0)));
        assert!(build(Construction::TwoWayWrdtm, &one, false).is_err());
        assert!(build(Construction::OneWayDhm, &two, false).is_err());
        assert!(build(Construction::UnaryWrdhm, &two, false).is_err());
        assert!(build(Construction::LemmaWr, &two, false).is_err());
        assert!(build(Construction::TwoWayDhm, &two, true).is_err());
    }

    #[test]
    fn skipping_the_wr_pass_yields_a_table() {
        let two = Automaton::TwoWay(random_2nfa(&GeneratorSpec::new(2, 2, 3)));
        let m = build(Construction::TwoWayWrdtm, &two, true).unwrap();
        assert!(m.as_table().is_some());
        assert!(!m.claims_weight_reducing());
    }
}
