use hennie::automata::{
    accepts_1nfa, accepts_2nfa, accepts_via_tables, gamma_tau_oracle, tables_of_prefix, update_tables, TapeSymbol,
};
use hennie::constructions::{build_1nfa_to_wrdhm_long, Automaton};
use hennie::format::{parse_automaton, print_automaton};
use hennie::harness::{random_1nfa, random_2nfa, random_unary_2nfa, witness_families, GeneratorSpec};
use hennie::tm::{run, RunOptions};
use proptest::prelude::*;

fn spec() -> impl Strategy<Value = GeneratorSpec> {
    (1usize..=4, 1usize..=3, any::<u64>(), 0.0f64..=1.0)
        .prop_map(|(n, sigma, seed, d)| GeneratorSpec::new(n, sigma, seed).with_density(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_are_deterministic(s in spec()) {
        let a = print_automaton(&Automaton::TwoWay(random_2nfa(&s))).unwrap();
        prop_assert_eq!(a, print_automaton(&Automaton::TwoWay(random_2nfa(&s))).unwrap());
        let b = print_automaton(&Automaton::OneWay(random_1nfa(&s))).unwrap();
        prop_assert_eq!(b, print_automaton(&Automaton::OneWay(random_1nfa(&s))).unwrap());
    }

    #[test]
    fn automaton_text_round_trips(s in spec(), one_way in any::<bool>()) {
        let a = if one_way { Automaton::OneWay(random_1nfa(&s)) } else { Automaton::TwoWay(random_2nfa(&s)) };
        let text = print_automaton(&a).unwrap();
        let back = parse_automaton(&text).unwrap();
        prop_assert_eq!(print_automaton(&back).unwrap(), text);
    }

    #[test]
    fn table_fold_decides_membership(s in spec(), w in prop::collection::vec(0usize..3, 0..12)) {
        let a = random_2nfa(&s);
        let w: Vec<usize> = w.into_iter().map(|x| x % a.alphabet().len()).collect();
        prop_assert_eq!(accepts_via_tables(&a, &w).unwrap(), accepts_2nfa(&a, &w).unwrap());
    }

    #[test]
    fn table_update_matches_definition(
        s in spec(),
        z in prop::collection::vec(0usize..3, 0..8),
        x in 0usize..4,
    ) {
        let a = random_2nfa(&s);
        let k = a.alphabet().len();
        let z: Vec<usize> = z.into_iter().map(|c| c % k).collect();
        let x = if x >= k { TapeSymbol::RightEnd } else { TapeSymbol::Input(x) };
        let mut zx = vec![TapeSymbol::LeftEnd];
        zx.extend(z.iter().map(|&c| TapeSymbol::Input(c)));
        zx.push(x);
        let got = update_tables(&a, &tables_of_prefix(&a, &z).unwrap(), x).unwrap();
        prop_assert_eq!(got, gamma_tau_oracle(&a, &zx).unwrap());
    }

    #[test]
    fn unary_generator_is_unary(n in 1usize..5, seed in any::<u64>()) {
        let a = random_unary_2nfa(&GeneratorSpec::unary(n, seed));
        prop_assert_eq!(a.alphabet().len(), 1);
        prop_assert_eq!(a.num_states(), n);
    }

    #[test]
    fn witness_predicates_agree_with_oracles(idx in 0usize..11, w in prop::collection::vec(0usize..2, 0..24)) {
        let all = witness_families();
        let f = &all[idx % all.len()];
        let k = f.automaton.alphabet().len();
        let w: Vec<usize> = w.into_iter().map(|c| c % k).collect();
        prop_assert_eq!(f.automaton.accepts(&w).unwrap(), (f.predicate)(&w), "{}", f.name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn powerset_machine_on_long_inputs(n in 1usize..=4, seed in any::<u64>(), w in prop::collection::vec(0usize..2, 4..40)) {
        let a = random_1nfa(&GeneratorSpec::new(n, 2, seed));
        let m = build_1nfa_to_wrdhm_long(&a).unwrap();
        let r = run(&m, &w, RunOptions::default()).unwrap();
        prop_assert_eq!(r.accepted(), accepts_1nfa(&a, &w).unwrap());
        prop_assert_eq!((r.left_extra, r.right_extra), (0, 0));
    }
}
