//! Reference interpreter: executes the program tree directly on a tape.
//! It shares only the cell codec with the compiler and is used to
//! cross-check compiled machines.

use super::compile::{Cell, Codec};
use super::ir::{Node, Program};
use crate::tm::{initial_tape, Sym, BLANK, LEFT_END, RIGHT_END};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error("move to cell {0} outside the segment")]
    OutOfSegment(i64),
    #[error("repeat loop exceeded {0} passes")]
    TooManyPasses(u64),
    #[error("step limit reached")]
    OutOfFuel,
}

/// Result of interpreting a program on an input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpResult {
    pub accepted: bool,
    /// Head moves performed.
    pub moves: u64,
    /// Non-blank tape contents by absolute cell.
    pub tape: BTreeMap<i64, Sym>,
}

enum Flow {
    Go,
    Halt(bool),
}

struct Interp<'a> {
    p: &'a Program,
    codec: Codec,
    tape: BTreeMap<i64, Sym>,
    head: i64,
    origin: i64,
    env: Vec<i64>,
    moves: u64,
    fuel: u64,
}

impl Interp<'_> {
    fn cell(&self) -> Cell {
        self.codec.decode(self.tape.get(&self.head).copied().unwrap_or(BLANK))
    }

    fn set_cell(&mut self, c: Cell) {
        let s = self.codec.encode(c);
        if s == BLANK {
            self.tape.remove(&self.head);
        } else {
            self.tape.insert(self.head, s);
        }
    }

    fn run(&mut self, n: &Node) -> Result<Flow, InterpError> {
        match n {
            Node::Seq(v) => {
                for x in v {
                    if let Flow::Halt(a) = self.run(x)? {
                        return Ok(Flow::Halt(a));
                    }
                }
                Ok(Flow::Go)
            }
            Node::MoveTo(e) => {
                let t = e.eval(&self.env);
                if t < self.p.segment.0 || t > self.p.segment.1 {
                    return Err(InterpError::OutOfSegment(t));
                }
                let target = t + self.origin;
                while self.head != target {
                    let dir: i64 = if target > self.head { 1 } else { -1 };
                    let c = self.cell();
                    match (c, dir) {
                        (Cell::Plain(LEFT_END), -1) | (Cell::Plain(RIGHT_END), 1) => {
                            return Ok(Flow::Halt(false))
                        }
                        _ => {}
                    }
                    let s = self.codec.departing(c);
                    self.tape.insert(self.head, s);
                    self.head += dir;
                    self.moves += 1;
                    if self.moves > self.fuel {
                        return Err(InterpError::OutOfFuel);
                    }
                }
                Ok(Flow::Go)
            }
            Node::ReadBit { track, then, els } => match self.codec.bits(self.cell()) {
                None => Ok(Flow::Halt(false)),
                Some(b) => self.run(if (b >> track) & 1 == 1 { then } else { els }),
            },
            Node::WriteBit { track, value } => match self.codec.bits(self.cell()) {
                None => Ok(Flow::Halt(false)),
                Some(b) => {
                    let m = 1u64 << track;
                    self.set_cell(Cell::Comp(if *value { b | m } else { b & !m }));
                    Ok(Flow::Go)
                }
            },
            Node::WriteSymbol(s) => {
                if matches!(self.cell(), Cell::Plain(LEFT_END) | Cell::Plain(RIGHT_END)) {
                    return Ok(Flow::Halt(false));
                }
                let c = self.codec.decode(*s);
                self.set_cell(c);
                Ok(Flow::Go)
            }
            Node::MatchSymbol(arms) => {
                let c = self.cell();
                match arms.iter().find(|(k, _)| self.codec.class_matches(*k, c)) {
                    Some((_, body)) => self.run(body),
                    None => Ok(Flow::Halt(false)),
                }
            }
            Node::ForStateIndex { var, bound, body } => {
                for i in 0..*bound {
                    self.env[*var] = i;
                    if let Flow::Halt(a) = self.run(body)? {
                        return Ok(Flow::Halt(a));
                    }
                }
                self.env[*var] = 0;
                Ok(Flow::Go)
            }
            Node::IfTransition { cond, then, els } => {
                self.run(if cond.eval(&self.env) { then } else { els })
            }
            Node::SetFlag { var, value } => {
                self.env[*var] = *value;
                Ok(Flow::Go)
            }
            Node::TestFlag { var, then, els } => {
                self.run(if self.env[*var] != 0 { then } else { els })
            }
            Node::RepeatWhileFlag {
                flag,
                max_passes,
                body,
            } => {
                let mut passes = 0;
                loop {
                    passes += 1;
                    if passes > *max_passes {
                        return Err(InterpError::TooManyPasses(*max_passes));
                    }
                    self.env[*flag] = 0;
                    if let Flow::Halt(a) = self.run(body)? {
                        return Ok(Flow::Halt(a));
                    }
                    if self.env[*flag] == 0 {
                        return Ok(Flow::Go);
                    }
                }
            }
            Node::Call { body, .. } => self.run(body),
            Node::Forever(body) => loop {
                if let Flow::Halt(a) = self.run(body)? {
                    return Ok(Flow::Halt(a));
                }
            },
            Node::ShiftWindow(d) => {
                self.origin += d;
                Ok(Flow::Go)
            }
            Node::Accept => Ok(Flow::Halt(true)),
            Node::Reject => Ok(Flow::Halt(false)),
        }
    }
}

/// Interprets `p` on input `w` (letter indices), stopping after `fuel`
/// head moves.
pub fn interpret(p: &Program, w: &[usize], fuel: u64) -> Result<InterpResult, InterpError> {
    let (contents, _) = initial_tape(p.end_marked, w);
    let tape = contents
        .into_iter()
        .enumerate()
        .filter(|(_, s)| *s != BLANK)
        .map(|(i, s)| (i as i64, s))
        .collect();
    interpret_on(p, tape, fuel)
}

/// Interprets `p` on an explicit initial tape with the head on cell 0.
pub fn interpret_on(p: &Program, tape: BTreeMap<i64, Sym>, fuel: u64) -> Result<InterpResult, InterpError> {
    let mut it = Interp {
        p,
        codec: Codec::new(p),
        tape,
        head: 0,
        origin: -p.start,
        env: p.initial_env(),
        moves: 0,
        fuel,
    };
    let accepted = match it.run(&p.body)? {
        Flow::Halt(a) => a,
        Flow::Go => false,
    };
    Ok(InterpResult {
        accepted,
        moves: it.moves,
        tape: it.tape,
    })
}
