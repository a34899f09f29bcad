//! One-tape deterministic Turing machines: representations, the simulator
//! with visit profiling and divergence detection, and static checkers.

mod check;
mod dtm;
mod run;
mod symbols;
mod table;

pub use check::{
    check_end_marked, check_explicit, check_halting_on, check_structural,
    check_weight_reducing, layer_or_cycle, rewrite_graph, verify_structure, HaltingReport,
    RankSource, WrWitness, EXPLICIT_CHECK_LIMIT,
};
pub use dtm::{size_metric, Dtm, MachineCore, SizeReport};
pub use run::{
    budget_multiplier, default_budget, initial_tape, run, run_with_tape, step,
    DivergenceCertificate, Outcome, RunOptions, RunResult, Tape, TmConfiguration,
    VisitProfile,
};
pub use symbols::*;
pub use table::{TableBuilder, TableDtm};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("invalid machine: {0}")]
    Invalid(String),
    #[error("transition {0} writes the blank symbol")]
    WritesBlank(String),
    #[error("transition {0} violates the endmarker discipline")]
    EndmarkerViolation(String),
    #[error("machine has no weight-reducing rank; an explicit step budget is required")]
    BudgetRequired,
    #[error("input symbol index {0} is outside the machine's alphabet")]
    InputSymbol(usize),
    #[error("table would have {entries} entries, above the limit of {limit}")]
    TooLarge { entries: u64, limit: u64 },
}
