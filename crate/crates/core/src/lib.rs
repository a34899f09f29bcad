//! Conversions from one-way and two-way nondeterministic finite automata into
//! restricted one-tape deterministic Turing machines (weight-reducing,
//! end-marked, Hennie), together with the simulator, static checkers and
//! brute-force oracles used to validate them.
//!
//! Module map:
//! - [`automata`]: 1NFA/2NFA data model, acceptance oracles, Shepherdson tables.
//! - [`tm`]: machine model, simulator with visit profiling, WR/end-marked checkers.
//! - [`builder`]: structured machine IR, its compiler and reference interpreter,
//!   and the two generic lemma passes (visit countdown, tape folding).
//! - [`constructions`]: the machine-producing constructions.
//! - [`harness`]: generators, witness families, equivalence checks, profiling,
//!   and the standard report suite.
//! - [`format`]: textual automaton and machine file formats.

pub mod automata;
pub mod builder;
pub mod constructions;
pub mod format;
pub mod harness;
pub mod tm;

/// Head movement direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    L,
    R,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::L => Dir::R,
            Dir::R => Dir::L,
        }
    }

    pub fn delta(self) -> i64 {
        match self {
            Dir::L => -1,
            Dir::R => 1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Dir::L => 'L',
            Dir::R => 'R',
        }
    }
}
