//! Structured machine programs, their compiler to transition tables, a
//! reference interpreter, a static visit bound, and the two lemma passes.

mod bound;
mod compile;
mod interp;
mod ir;
mod lemmas;

pub use bound::{static_visit_bound, BoundError};
pub use compile::{compile, flatten, CompileError, CompileOptions, Compiled, Flat, Instr};
pub use interp::{interpret, interpret_on, InterpError, InterpResult};
pub use ir::{cst, var, Expr, Node, Pred, Program, SymClass, TrackAlphabet, Var, VarDecl};
pub use lemmas::{
    fold_to_hennie, verify_visit_bound, wr_from_visit_bounded, Countdown, Folded,
    VisitBoundViolation,
};
