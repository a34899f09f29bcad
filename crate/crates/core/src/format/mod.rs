//! Line-oriented text formats for automata and machines.
//!
//! One directive per line, `directive: arguments`; blank lines and `#`
//! comments are ignored. Names are whitespace-free tokens.
//!
//! Automata:
//!
//! ```text
//! kind: 2nfa
//! states: s0 s1
//! alphabet: a b
//! initial: s0
//! final: s1
//! trans: s0 < -> s0 R
//! trans: s0 a -> s1 R
//! ```
//!
//! One-way transitions omit the direction (`trans: s0 a -> s1`). `<` and `>`
//! are the endmarkers.
//!
//! Machines (explicit tables only):
//!
//! ```text
//! kind: dtm
//! flags: endmarked
//! input: a b
//! blank: _
//! work: x (a|1)
//! states: q0 q1
//! initial: q0
//! final: q1
//! rank: a=2 x=1
//! trans: q0 a -> q1 x R
//! ```
//!
//! `work` lists the symbols after the blank, the endmarkers and the input
//! letters, in id order.

mod automaton;
mod machine;

pub use automaton::{parse_automaton, print_automaton};
pub use machine::{parse_machine, print_machine};

use crate::automata::AutomatonError;
use crate::tm::MachineError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing directive `{0}`")]
    Missing(&'static str),
    #[error("invalid automaton: {0}")]
    Automaton(#[from] AutomatonError),
    #[error("invalid machine: {0}")]
    Machine(#[from] MachineError),
    #[error("cannot print: {0}")]
    Unprintable(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped: (1-based line number,
/// directive, arguments).
fn directives(text: &str) -> Result<Vec<(usize, String, String)>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (d, rest) = line
            .split_once(':')
            .ok_or_else(|| syntax(i + 1, format!("expected `directive: ...`, got `{line}`")))?;
        out.push((i + 1, d.trim().to_string(), rest.trim().to_string()));
    }
    Ok(out)
}

fn strip_comment(line: &str) -> &str {
    let mut prev_space = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_space {
            return &line[..i];
        }
        prev_space = c.is_whitespace();
    }
    line
}

/// Whether `s` can be written as a name token.
fn is_token(s: &str) -> bool {
    !s.is_empty() && s != "->" && !s.starts_with('#') && !s.chars().any(char::is_whitespace)
}

/// Splits `a b -> c d` into its two sides.
fn arrow(line: usize, args: &str) -> Result<(Vec<&str>, Vec<&str>), FormatError> {
    let toks: Vec<&str> = args.split_whitespace().collect();
    let k = toks
        .iter()
        .position(|&t| t == "->")
        .ok_or_else(|| syntax(line, "transition needs `->`"))?;
    Ok((toks[..k].to_vec(), toks[k + 1..].to_vec()))
}
