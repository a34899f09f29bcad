//! Symbol and state numbering shared by every machine.
//!
//! Every machine numbers its work symbols from 0: the blank is 0, the
//! endmarkers ⊢ and ⊣ are 1 and 2 (reserved even in machines that never use
//! them), the input symbols follow in alphabet order, and machine-specific
//! symbols come after. Sharing the low ids lets machines be stacked on top
//! of each other without translation of the input.

use crate::Dir;

pub type Sym = u64;
pub type StateId = u64;

pub const BLANK: Sym = 0;
pub const LEFT_END: Sym = 1;
pub const RIGHT_END: Sym = 2;
pub const FIRST_INPUT: Sym = 3;

/// Symbol id of input letter `i`.
pub fn input_sym(i: usize) -> Sym {
    FIRST_INPUT + i as Sym
}

/// Number of reserved plus input symbols, i.e. the first machine-specific id.
pub fn base_symbols(alphabet_len: usize) -> Sym {
    FIRST_INPUT + alphabet_len as Sym
}

pub fn is_endmarker(s: Sym) -> bool {
    s == LEFT_END || s == RIGHT_END
}

/// Names of the base symbols: `_`, `<`, `>`, then the input letters.
pub fn base_symbol_names(alphabet: &[char]) -> Vec<String> {
    let mut v = vec!["_".to_string(), "<".to_string(), ">".to_string()];
    v.extend(alphabet.iter().map(|c| c.to_string()));
    v
}

/// One transition: next state, written symbol, head move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Action {
    pub next: StateId,
    pub write: Sym,
    pub dir: Dir,
}

impl Action {
    pub fn new(next: StateId, write: Sym, dir: Dir) -> Self {
        Action { next, write, dir }
    }
}
