//! Generators, witness families, equivalence checks, profiling and the
//! standard suite.
pub mod equiv;
pub mod families;
pub mod fit;
pub mod gen;
pub mod profile;
pub mod suite;

pub use equiv::{equiv_check, plan_words, EquivMode, EquivPlan, EquivReport, Mismatch, DEFAULT_BUDGET, EXHAUSTIVE_LIMIT};
pub use families::{kth_from_end, ping_pong, unary_divisibility, unary_threshold, witness, witness_families, Predicate, Witness};
pub use fit::{fit_linear, fit_power, LinearFit, PowerFit};
pub use gen::{letters, random_1nfa, random_2nfa, random_unary_2nfa, random_word, words_of_length, GeneratorSpec};
pub use profile::{profile_csv, profile_scaling, profile_words, ProfileRow};
pub use suite::{corpus_witnesses, run_standard_suite, standard_corpus, write_suite, CriterionResult, SuiteReport};
