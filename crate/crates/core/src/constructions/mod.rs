//! Machine-producing constructions.

mod census;
mod one_way;
mod reach;
mod registry;
mod savitch;
mod sliding;
mod staged;
mod unary;
pub mod update;

pub use census::{build_1nfa_to_dhm, build_2nfa_to_dhm};
pub use one_way::{build_1nfa_to_wrdhm_long, powerset_machine, powerset_program};
pub use registry::{apply_pass, build, Automaton, Construction, Guarantee};
pub use reach::{accepts_by_reachable, graph_size, reachable_fn, reachable_one_way_fn};
pub use savitch::SavitchMachine;
pub use sliding::{build_2nfa_to_wrdhm_long, build_2nfa_to_wrdtm, build_update_machine, sliding_machine, Bounded};
pub use staged::Staged;
pub use unary::build_unary_2nfa_to_wrdhm;

use crate::automata::AutomatonError;
use crate::builder::{BoundError, CompileError};
use crate::tm::MachineError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("compile: {0}")]
    Compile(#[from] CompileError),
    #[error("visit bound: {0}")]
    Bound(#[from] BoundError),
    #[error("machine: {0}")]
    Machine(#[from] MachineError),
    #[error("automaton: {0}")]
    Automaton(#[from] AutomatonError),
    #[error("{0}")]
    Domain(String),
}
