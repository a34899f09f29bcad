//! Finite automata: data model, brute-force oracles and the Shepherdson
//! table calculus every construction is checked against.

mod nfa;
mod oracle;
mod tables;
mod trie;

pub use nfa::{
    decode_word, encode_word, AutomatonError, OneWayNfa, TapeSymbol, TwoWayNfa,
    MAX_TABLE_STATES, RESERVED_CHARS,
};
pub use oracle::{
    accepts_1nfa, accepts_2nfa, end_marked_tape, gamma_tau_oracle, is_edge, successors,
    ConfigNode,
};
pub use tables::{
    accepts_via_tables, tables_of_prefix, update_tables, update_tables_traced, ReachTables,
    SaturationTrace,
};
pub use trie::{short_string_classifier, trie_size};
