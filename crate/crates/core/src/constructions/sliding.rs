//! Two-way automata to weight-reducing machines by table sliding.

use super::update::{sliding_program, update_program, WindowKind};
use super::ConstructionError;
use crate::automata::{TapeSymbol, TwoWayNfa};
use crate::builder::{compile, fold_to_hennie, static_visit_bound, wr_from_visit_bounded, CompileOptions};
use crate::tm::{Dtm, TableDtm};
use std::sync::Arc;

/// A compiled visit-bounded machine together with its static visit bound.
#[derive(Clone, Debug)]
pub struct Bounded {
    pub machine: TableDtm,
    pub visit_bound: u64,
}

/// The standalone table-update machine for `x` (an input letter or ⊣):
/// end-marked, over the bit alphabet {0, 1}, transforming the bit word of
/// (γ_z, τ_z) into that of (γ_zx, τ_zx).
pub fn build_update_machine(a: &TwoWayNfa, x: TapeSymbol) -> Result<Dtm, ConstructionError> {
    if x == TapeSymbol::LeftEnd {
        return Err(ConstructionError::Domain("no update on the left endmarker".into()));
    }
    if let TapeSymbol::Input(i) = x {
        if i >= a.alphabet().len() {
            return Err(ConstructionError::Domain(format!("symbol index {i} out of range")));
        }
    }
    let p = update_program(a, x);
    Ok(Dtm::Table(compile(&p, CompileOptions::default())?.machine))
}

/// The sliding simulation before the countdown pass.
pub fn sliding_machine(a: &TwoWayNfa, kind: WindowKind) -> Result<Bounded, ConstructionError> {
    let p = sliding_program(a, kind);
    let visit_bound = static_visit_bound(&p)?;
    let machine = compile(&p, CompileOptions::default())?.machine;
    Ok(Bounded { machine, visit_bound })
}

/// Halting weight-reducing machine equivalent to `a` on every input. It uses
/// n + n² blank cells to the left of the input.
pub fn build_2nfa_to_wrdtm(a: &TwoWayNfa) -> Result<Dtm, ConstructionError> {
    let b = sliding_machine(a, WindowKind::Wide)?;
    Ok(wr_from_visit_bounded(Arc::new(Dtm::Table(b.machine)), b.visit_bound)?)
}

/// End-marked weight-reducing Hennie machine agreeing with `a` on inputs of
/// length at least n²: the compact n²-cell window, the countdown, and the
/// fold of the window onto a second track of the input.
pub fn build_2nfa_to_wrdhm_long(a: &TwoWayNfa) -> Result<Dtm, ConstructionError> {
    let n = a.num_states() as u64;
    let b = sliding_machine(a, WindowKind::Compact)?;
    let wr = wr_from_visit_bounded(Arc::new(Dtm::Table(b.machine)), b.visit_bound)?;
    Ok(fold_to_hennie(Arc::new(wr), n * n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::accepts_2nfa;
    use crate::harness::{random_2nfa, words_of_length, GeneratorSpec};
    use crate::tm::{check_end_marked, run, verify_structure, RunOptions};

    #[test]
    fn wr_machine_is_equivalent_and_weight_reducing() {
        let a = random_2nfa(&GeneratorSpec::new(2, 2, 5).with_density(0.35));
        let m = build_2nfa_to_wrdtm(&a).unwrap();
        verify_structure(&m).unwrap();
        for len in 0..6 {
            for w in words_of_length(2, len) {
                let r = run(&m, &w, RunOptions::default()).unwrap();
                assert_eq!(r.accepted(), accepts_2nfa(&a, &w).unwrap());
                assert!(r.left_extra <= 6 && r.right_extra == 0);
            }
        }
    }

    #[test]
    fn long_machine_agrees_from_n_squared() {
        let a = random_2nfa(&GeneratorSpec::new(2, 2, 8).with_density(0.35));
        let m = build_2nfa_to_wrdhm_long(&a).unwrap();
        check_end_marked(&m).unwrap();
        verify_structure(&m).unwrap();
        for len in 4..8 {
            for w in words_of_length(2, len) {
                let r = run(&m, &w, RunOptions::default()).unwrap();
                assert_eq!(r.accepted(), accepts_2nfa(&a, &w).unwrap(), "{w:?}");
            }
        }
    }

    #[test]
    fn update_machine_rejects_left_endmarker() {
        let a = random_2nfa(&GeneratorSpec::new(2, 2, 0));
        assert!(build_update_machine(&a, TapeSymbol::LeftEnd).is_err());
    }
}
