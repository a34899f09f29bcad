//! End-to-end: registry constructions, file round trips of materialised
//! machines, and the equivalence harness on witness families.

use hennie::automata::TwoWayNfa;
use hennie::constructions::{apply_pass, build, sliding_machine, update::WindowKind, Automaton, Construction};
use hennie::format::{parse_machine, print_machine};
use hennie::harness::{
    equiv_check, random_1nfa, random_2nfa, random_unary_2nfa, unary_threshold, witness, EquivPlan, GeneratorSpec,
};
use hennie::tm::{check_end_marked, check_weight_reducing, run, Dtm, RunOptions};

fn certify(c: Construction, a: &Automaton, max_len: usize) {
    let m = build(c, a, false).unwrap();
    let r = equiv_check(a, &m, &EquivPlan::exhaustive(0, max_len), c.guarantee(a.num_states()));
    assert!(r.certified(), "{c}: {r}");
    assert!(check_weight_reducing(&m).is_valid(), "{c}");
}

#[test]
fn every_automaton_construction_on_small_inputs() {
    let two = Automaton::TwoWay(random_2nfa(&GeneratorSpec::new(2, 2, 11)));
    let one = Automaton::OneWay(random_1nfa(&GeneratorSpec::new(3, 2, 11)));
    let unary = Automaton::TwoWay(random_unary_2nfa(&GeneratorSpec::unary(2, 11)));
    certify(Construction::TwoWayWrdtm, &two, 7);
    certify(Construction::TwoWayWrdhmLong, &two, 7);
    certify(Construction::UnaryWrdhm, &unary, 14);
    certify(Construction::OneWayWrdhmLong, &one, 7);
    for (c, a) in [(Construction::TwoWayDhm, &two), (Construction::OneWayDhm, &one)] {
        let m = build(c, a, false).unwrap();
        let r = equiv_check(a, &m, &EquivPlan::exhaustive(0, 6), c.guarantee(a.num_states()));
        assert!(r.certified(), "{c}: {r}");
        assert!(check_end_marked(&m).is_ok(), "{c}");
    }
}

#[test]
fn materialised_machines_survive_the_file_format() {
    let a = Automaton::TwoWay(TwoWayNfa::from_one_way(&random_1nfa(&GeneratorSpec::new(1, 2, 4))));
    let m = build(Construction::TwoWayWrdtm, &a, false).unwrap();
    let t = m.materialize(1 << 24).unwrap();
    let back = parse_machine(&print_machine(&t).unwrap()).unwrap();
    let back = Dtm::Table(back);
    assert!(check_weight_reducing(&back).is_valid());
    for w in [vec![], vec![0], vec![1, 0, 1], vec![0, 0, 1, 1, 0]] {
        let x = run(&m, &w, RunOptions::default()).unwrap();
        let y = run(&back, &w, RunOptions::default()).unwrap();
        assert_eq!((x.outcome, x.steps, x.visits), (y.outcome, y.steps, y.visits));
    }
}

#[test]
fn lemma_passes_through_the_registry() {
    let two = random_2nfa(&GeneratorSpec::new(1, 2, 2));
    let k = sliding_machine(&two, WindowKind::Wide).unwrap().visit_bound;
    let a = Automaton::TwoWay(two);
    let raw = build(Construction::TwoWayWrdtm, &a, true).unwrap();
    assert!(!check_weight_reducing(&raw).is_valid());
    let wr = apply_pass(Construction::LemmaWr, raw, k).unwrap();
    assert!(check_weight_reducing(&wr).is_valid());
    let r = equiv_check(&a, &wr, &EquivPlan::exhaustive(0, 6), Construction::LemmaWr.guarantee(1));
    assert!(r.certified(), "{r}");
    let folded = apply_pass(Construction::LemmaFold, wr, 2).unwrap();
    let r = equiv_check(&a, &folded, &EquivPlan::exhaustive(2, 7), Construction::LemmaFold.guarantee(1));
    assert!(r.certified(), "{r}");
    assert!(check_end_marked(&folded).is_ok());
}

#[test]
fn witness_families_through_the_hennie_machines() {
    for name in ["kth-from-end-3", "unary-div-2", "ping-pong-1"] {
        let w = witness(name).unwrap();
        let c = match w.automaton {
            Automaton::OneWay(_) => Construction::OneWayDhm,
            Automaton::TwoWay(_) => Construction::TwoWayDhm,
        };
        let m = build(c, &w.automaton, false).unwrap();
        let max = if w.automaton.alphabet().len() == 1 { 12 } else { 7 };
        let r = equiv_check(&w.automaton, &m, &EquivPlan::exhaustive(0, max), c.guarantee(w.automaton.num_states()));
        assert!(r.certified(), "{name}: {r}");
    }
    let t = Automaton::TwoWay(unary_threshold(2));
    certify(Construction::UnaryWrdhm, &t, 40);
}
