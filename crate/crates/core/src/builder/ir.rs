//! The structured machine program.
//!
//! A program runs on a working segment of the tape addressed relative to a
//! window origin. Its control state consists of a program point, the head
//! position relative to the origin, and an environment of small integer
//! variables (loop indices and flags). Every value in the environment has a
//! declared finite range, so the compiler can enumerate control states.

use crate::tm::Sym;
use std::fmt;
use std::sync::Arc;

/// Index of a variable in the environment.
pub type Var = usize;

/// Integer expressions over the environment.
#[derive(Clone)]
pub enum Expr {
    Const(i64),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, env: &[i64]) -> i64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(v) => env[*v],
            Expr::Add(a, b) => a.eval(env) + b.eval(env),
            Expr::Sub(a, b) => a.eval(env) - b.eval(env),
            Expr::Mul(a, b) => a.eval(env) * b.eval(env),
        }
    }

    /// Evaluates with some variables unknown (`None`).
    pub fn eval_partial(&self, env: &[Option<i64>]) -> Option<i64> {
        Some(match self {
            Expr::Const(c) => *c,
            Expr::Var(v) => env[*v]?,
            Expr::Add(a, b) => a.eval_partial(env)? + b.eval_partial(env)?,
            Expr::Sub(a, b) => a.eval_partial(env)? - b.eval_partial(env)?,
            Expr::Mul(a, b) => a.eval_partial(env)? * b.eval_partial(env)?,
        })
    }

    pub fn vars(&self, out: &mut Vec<Var>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => out.push(*v),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }
}

impl From<i64> for Expr {
    fn from(c: i64) -> Self {
        Expr::Const(c)
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        match (&self, &o) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a + b),
            (_, Expr::Const(0)) => self,
            _ => Expr::Add(Box::new(self), Box::new(o)),
        }
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(o))
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        match (&self, &o) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a * b),
            (_, Expr::Const(1)) => self,
            _ => Expr::Mul(Box::new(self), Box::new(o)),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(v) => write!(f, "v{v}"),
            Expr::Add(a, b) => write!(f, "({a:?}+{b:?})"),
            Expr::Sub(a, b) => write!(f, "({a:?}-{b:?})"),
            Expr::Mul(a, b) => write!(f, "{a:?}*{b:?}"),
        }
    }
}

pub fn var(v: Var) -> Expr {
    Expr::Var(v)
}

pub fn cst(c: i64) -> Expr {
    Expr::Const(c)
}

/// A compile-time predicate over the environment, typically a question
/// about the source automaton's transition relation.
#[derive(Clone)]
pub struct Pred {
    pub label: String,
    pub deps: Vec<Var>,
    pub f: Arc<dyn Fn(&[i64]) -> bool + Send + Sync>,
}

impl Pred {
    pub fn new(
        label: impl Into<String>,
        deps: Vec<Var>,
        f: impl Fn(&[i64]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Pred {
            label: label.into(),
            deps,
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, env: &[i64]) -> bool {
        (self.f)(env)
    }
}

impl fmt::Debug for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

/// What a [`Node::MatchSymbol`] arm matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymClass {
    Blank,
    LeftEnd,
    RightEnd,
    /// The input letter with this index.
    Input(usize),
    /// Any track tuple.
    Composite,
}

#[derive(Clone, Debug)]
pub enum Node {
    Seq(Vec<Node>),
    /// Walks the head to the given segment cell.
    MoveTo(Expr),
    /// Branches on a bit of the current cell; rejects on an endmarker.
    ReadBit {
        track: usize,
        then: Box<Node>,
        els: Box<Node>,
    },
    /// Sets a bit of the current cell; rejects on an endmarker.
    WriteBit { track: usize, value: bool },
    /// Overwrites the current cell with a plain (non-blank) symbol.
    WriteSymbol(Sym),
    /// Dispatches on the class of the current cell; unmatched classes
    /// reject.
    MatchSymbol(Vec<(SymClass, Node)>),
    /// Runs `body` for `var = 0..bound`; the variable is 0 afterwards.
    ForStateIndex {
        var: Var,
        bound: i64,
        body: Box<Node>,
    },
    IfTransition {
        cond: Pred,
        then: Box<Node>,
        els: Box<Node>,
    },
    SetFlag { var: Var, value: i64 },
    TestFlag {
        var: Var,
        then: Box<Node>,
        els: Box<Node>,
    },
    /// Clears `flag`, runs `body`, and repeats while the body set the flag.
    /// The body is known to stabilise within `max_passes` passes.
    RepeatWhileFlag {
        flag: Var,
        max_passes: u64,
        body: Box<Node>,
    },
    /// A named, shared subprogram, inlined at compile time.
    Call { label: String, body: Arc<Node> },
    Forever(Box<Node>),
    /// Moves the window origin by the given number of cells.
    ShiftWindow(i64),
    Accept,
    Reject,
}

impl Node {
    pub fn seq(v: Vec<Node>) -> Node {
        Node::Seq(v)
    }
    pub fn move_to(e: impl Into<Expr>) -> Node {
        Node::MoveTo(e.into())
    }
    pub fn read_bit(track: usize, then: Node, els: Node) -> Node {
        Node::ReadBit {
            track,
            then: Box::new(then),
            els: Box::new(els),
        }
    }
    pub fn write_bit(track: usize, value: bool) -> Node {
        Node::WriteBit { track, value }
    }
    pub fn for_each(var: Var, bound: i64, body: Node) -> Node {
        Node::ForStateIndex {
            var,
            bound,
            body: Box::new(body),
        }
    }
    pub fn if_(cond: Pred, then: Node) -> Node {
        Node::IfTransition {
            cond,
            then: Box::new(then),
            els: Box::new(Node::nop()),
        }
    }
    pub fn if_else(cond: Pred, then: Node, els: Node) -> Node {
        Node::IfTransition {
            cond,
            then: Box::new(then),
            els: Box::new(els),
        }
    }
    pub fn set(var: Var, value: i64) -> Node {
        Node::SetFlag { var, value }
    }
    pub fn test(var: Var, then: Node, els: Node) -> Node {
        Node::TestFlag {
            var,
            then: Box::new(then),
            els: Box::new(els),
        }
    }
    pub fn repeat_while(flag: Var, max_passes: u64, body: Node) -> Node {
        Node::RepeatWhileFlag {
            flag,
            max_passes,
            body: Box::new(body),
        }
    }
    pub fn call(label: impl Into<String>, body: Node) -> Node {
        Node::Call {
            label: label.into(),
            body: Arc::new(body),
        }
    }
    pub fn nop() -> Node {
        Node::Seq(Vec::new())
    }

    /// Indented textual dump.
    pub fn dump(&self, vars: &[VarDecl]) -> String {
        let mut s = String::new();
        self.dump_into(vars, 0, &mut s);
        s
    }

    fn dump_into(&self, vars: &[VarDecl], depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        let name = |v: Var| vars.get(v).map(|d| d.name.clone()).unwrap_or(format!("v{v}"));
        match self {
            Node::Seq(v) => {
                for n in v {
                    n.dump_into(vars, depth, out);
                }
            }
            Node::MoveTo(e) => out.push_str(&format!("{pad}move_to {e:?}\n")),
            Node::ReadBit { track, then, els } => {
                out.push_str(&format!("{pad}if bit[{track}]\n"));
                then.dump_into(vars, depth + 1, out);
                out.push_str(&format!("{pad}else\n"));
                els.dump_into(vars, depth + 1, out);
            }
            Node::WriteBit { track, value } => {
                out.push_str(&format!("{pad}bit[{track}] := {}\n", *value as u8))
            }
            Node::WriteSymbol(s) => out.push_str(&format!("{pad}write #{s}\n")),
            Node::MatchSymbol(arms) => {
                out.push_str(&format!("{pad}match symbol\n"));
                for (c, n) in arms {
                    out.push_str(&format!("{pad}  {c:?} =>\n"));
                    n.dump_into(vars, depth + 2, out);
                }
            }
            Node::ForStateIndex { var, bound, body } => {
                out.push_str(&format!("{pad}for {} in 0..{bound}\n", name(*var)));
                body.dump_into(vars, depth + 1, out);
            }
            Node::IfTransition { cond, then, els } => {
                out.push_str(&format!("{pad}if {cond:?}\n"));
                then.dump_into(vars, depth + 1, out);
                out.push_str(&format!("{pad}else\n"));
                els.dump_into(vars, depth + 1, out);
            }
            Node::SetFlag { var, value } => {
                out.push_str(&format!("{pad}{} := {value}\n", name(*var)))
            }
            Node::TestFlag { var, then, els } => {
                out.push_str(&format!("{pad}if {}\n", name(*var)));
                then.dump_into(vars, depth + 1, out);
                out.push_str(&format!("{pad}else\n"));
                els.dump_into(vars, depth + 1, out);
            }
            Node::RepeatWhileFlag {
                flag,
                max_passes,
                body,
            } => {
                out.push_str(&format!("{pad}repeat (≤{max_passes}) while {}\n", name(*flag)));
                body.dump_into(vars, depth + 1, out);
            }
            Node::Call { label, body } => {
                out.push_str(&format!("{pad}call {label}\n"));
                body.dump_into(vars, depth + 1, out);
            }
            Node::Forever(b) => {
                out.push_str(&format!("{pad}forever\n"));
                b.dump_into(vars, depth + 1, out);
            }
            Node::ShiftWindow(d) => out.push_str(&format!("{pad}shift_window {d:+}\n")),
            Node::Accept => out.push_str(&format!("{pad}accept\n")),
            Node::Reject => out.push_str(&format!("{pad}reject\n")),
        }
    }
}

/// A declared variable with its value range `0..size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub size: i64,
    pub init: i64,
}

/// Track layout of the composite work symbols.
///
/// Composite symbols are bit vectors over `tracks` tracks. Plain symbols
/// (blank and input letters) project onto composites through `input_proj`
/// and the all-zero vector for the blank, so reading a track is total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackAlphabet {
    pub tracks: usize,
    /// Composite value seen when reading track bits of input letter `i`.
    pub input_proj: Vec<u64>,
    pub track_names: Vec<String>,
}

impl TrackAlphabet {
    pub fn new(tracks: usize, alphabet_len: usize) -> Self {
        TrackAlphabet {
            tracks,
            input_proj: vec![0; alphabet_len],
            track_names: (0..tracks).map(|t| format!("t{t}")).collect(),
        }
    }

    pub fn num_composites(&self) -> u64 {
        1 << self.tracks
    }

    /// Printable composite, e.g. `(0|1)`.
    pub fn composite_name(&self, c: u64) -> String {
        let bits: Vec<String> = (0..self.tracks).map(|t| ((c >> t) & 1).to_string()).collect();
        format!("({})", bits.join("|"))
    }
}

/// A complete program.
#[derive(Clone, Debug)]
pub struct Program {
    pub name: String,
    pub input: Vec<char>,
    pub tracks: TrackAlphabet,
    pub vars: Vec<VarDecl>,
    /// Inclusive range of segment cells the head may occupy.
    pub segment: (i64, i64),
    /// Head position at start, relative to the window origin.
    pub start: i64,
    pub end_marked: bool,
    pub body: Node,
}

impl Program {
    pub fn new(name: impl Into<String>, input: &[char], tracks: TrackAlphabet) -> Self {
        Program {
            name: name.into(),
            input: input.to_vec(),
            tracks,
            vars: Vec::new(),
            segment: (0, 0),
            start: 0,
            end_marked: false,
            body: Node::nop(),
        }
    }

    pub fn declare(&mut self, name: impl Into<String>, size: i64) -> Var {
        self.declare_init(name, size, 0)
    }

    pub fn declare_init(&mut self, name: impl Into<String>, size: i64, init: i64) -> Var {
        self.vars.push(VarDecl {
            name: name.into(),
            size,
            init,
        });
        self.vars.len() - 1
    }

    pub fn initial_env(&self) -> Vec<i64> {
        self.vars.iter().map(|v| v.init).collect()
    }

    pub fn dump(&self) -> String {
        let mut s = format!(
            "program {} segment [{}, {}] start {} tracks {}{}\n",
            self.name,
            self.segment.0,
            self.segment.1,
            self.start,
            self.tracks.tracks,
            if self.end_marked { " endmarked" } else { "" }
        );
        for v in &self.vars {
            s.push_str(&format!("var {} : 0..{} = {}\n", v.name, v.size, v.init));
        }
        s.push_str(&self.body.dump(&self.vars));
        s
    }
}
