//! One-way automata: the powerset window.
//!
//! The current subset of states lives as an n-bit word on the n cells left
//! of the next input symbol. For each symbol the successor subset is written
//! one cell further right on the other track, so the word slides along with
//! the input; whether the subset meets F is carried in the control.

use super::sliding::Bounded;
use super::ConstructionError;
use crate::automata::OneWayNfa;
use crate::builder::{
    compile, cst, fold_to_hennie, static_visit_bound, var, wr_from_visit_bounded, CompileOptions, Node, Pred,
    Program, SymClass, TrackAlphabet,
};
use crate::tm::Dtm;
use std::sync::Arc;

/// The sliding powerset program over tracks X and Y.
pub fn powerset_program(a: &OneWayNfa) -> Program {
    let n = a.num_states();
    let ni = n as i64;
    let mut tracks = TrackAlphabet::new(2, a.alphabet().len());
    tracks.track_names = vec!["X".into(), "Y".into()];
    let mut p = Program::new("powerset", a.alphabet(), tracks);
    p.segment = (0, ni);
    p.start = ni;
    let q = p.declare("q", ni);
    let r = p.declare("p", ni);
    let found = p.declare("found", 2);
    let acc = p.declare_init("acc", 2, a.is_final(a.initial()) as i64);
    let arc = Arc::new(a.clone());

    let mut init = Vec::new();
    for s in 0..n {
        init.push(Node::move_to(cst(s as i64)));
        init.push(Node::write_bit(0, s == a.initial()));
    }

    let step = |x: usize, y: usize| {
        let mut arms = vec![
            (SymClass::Blank, Node::test(acc, Node::Accept, Node::Reject)),
            (SymClass::Composite, Node::test(acc, Node::Accept, Node::Reject)),
        ];
        for c in 0..a.alphabet().len() {
            let moves = {
                let a = arc.clone();
                Pred::new(format!("q in delta(p,{})", a.alphabet()[c]), vec![r, q], move |e| {
                    a.delta(e[r] as usize, c).contains(&(e[q] as usize))
                })
            };
            let is_final = {
                let a = arc.clone();
                Pred::new("q in F", vec![q], move |e| a.is_final(e[q] as usize))
            };
            let body = Node::for_each(
                q,
                ni,
                Node::seq(vec![
                    Node::for_each(
                        r,
                        ni,
                        Node::if_(
                            moves,
                            Node::seq(vec![
                                Node::move_to(var(r)),
                                Node::read_bit(x, Node::set(found, 1), Node::nop()),
                            ]),
                        ),
                    ),
                    Node::move_to(var(q) + cst(1)),
                    Node::test(
                        found,
                        Node::seq(vec![
                            Node::write_bit(y, true),
                            Node::if_(is_final, Node::set(acc, 1)),
                        ]),
                        Node::write_bit(y, false),
                    ),
                    Node::set(found, 0),
                ]),
            );
            arms.push((
                SymClass::Input(c),
                Node::seq(vec![Node::set(acc, 0), Node::call(format!("subset[{}]", a.alphabet()[c]), body)]),
            ));
        }
        Node::seq(vec![Node::move_to(cst(ni)), Node::MatchSymbol(arms), Node::ShiftWindow(1)])
    };
    p.body = Node::seq(vec![
        Node::call("init", Node::seq(init)),
        Node::Forever(Box::new(Node::seq(vec![
            Node::call("even", step(0, 1)),
            Node::call("odd", step(1, 0)),
        ]))),
    ]);
    p
}

/// The compiled powerset program and its static visit bound.
pub fn powerset_machine(a: &OneWayNfa) -> Result<Bounded, ConstructionError> {
    let p = powerset_program(a);
    let visit_bound = static_visit_bound(&p)?;
    let machine = compile(&p, CompileOptions::default())?.machine;
    Ok(Bounded { machine, visit_bound })
}

/// End-marked weight-reducing Hennie machine agreeing with `a` on inputs of
/// length at least n.
pub fn build_1nfa_to_wrdhm_long(a: &OneWayNfa) -> Result<Dtm, ConstructionError> {
    let b = powerset_machine(a)?;
    let wr = wr_from_visit_bounded(Arc::new(Dtm::Table(b.machine)), b.visit_bound)?;
    Ok(fold_to_hennie(Arc::new(wr), a.num_states() as u64)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::accepts_1nfa;
    use crate::builder::interpret;
    use crate::harness::{random_1nfa, words_of_length, GeneratorSpec};
    use crate::tm::{run, RunOptions};

    #[test]
    fn powerset_program_tracks_subsets() {
        for seed in 0..5 {
            let a = random_1nfa(&GeneratorSpec::new(3, 2, seed).with_density(0.4));
            let b = powerset_machine(&a).unwrap();
            for len in 0..6 {
                for w in words_of_length(2, len) {
                    let want = accepts_1nfa(&a, &w).unwrap();
                    assert_eq!(interpret(&powerset_program(&a), &w, 1 << 20).unwrap().accepted, want);
                    let r = run(&b.machine, &w, RunOptions::with_budget(1 << 20)).unwrap();
                    assert_eq!(r.accepted(), want, "{seed} {w:?}");
                    assert!(r.max_visits() <= b.visit_bound);
                    assert!(r.left_extra <= 3);
                }
            }
        }
    }

    #[test]
    fn folded_machine_agrees_from_n() {
        let a = random_1nfa(&GeneratorSpec::new(3, 2, 4).with_density(0.4));
        let m = build_1nfa_to_wrdhm_long(&a).unwrap();
        for len in 3..7 {
            for w in words_of_length(2, len) {
                let r = run(&m, &w, RunOptions::default()).unwrap();
                assert_eq!(r.accepted(), accepts_1nfa(&a, &w).unwrap());
            }
        }
    }
}
