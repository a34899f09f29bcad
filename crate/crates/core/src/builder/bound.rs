//! Static per-cell visit bound of a program.
//!
//! An abstract run over the program tree: loop variables are concrete
//! (loops are unrolled), variables assigned under tape-dependent branches
//! become unknown, and branching on the tape joins both sides by taking the
//! per-cell maximum of visits and the hull of head positions. A walk from a
//! head interval `[lo, hi]` to `t` charges one departure to every cell of
//! the hull except `t`; every halt charges one more (the compiled machine
//! may need a final step to flush a pending write).

use super::ir::{Node, Program};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("move target depends on the tape: {0}")]
    UnknownTarget(String),
    #[error("a forever loop must shift the window rightward each iteration")]
    NonAdvancingLoop,
    #[error("nested forever loops are not supported")]
    NestedForever,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Counts {
    lo: i64,
    v: Vec<u64>,
}

impl Counts {
    fn ensure(&mut self, a: i64, b: i64) {
        if self.v.is_empty() {
            self.lo = a;
            self.v = vec![0; (b - a + 1) as usize];
            return;
        }
        if a < self.lo {
            let mut nv = vec![0; (self.lo - a) as usize];
            nv.extend_from_slice(&self.v);
            self.v = nv;
            self.lo = a;
        }
        let hi = self.lo + self.v.len() as i64 - 1;
        if b > hi {
            self.v.resize(self.v.len() + (b - hi) as usize, 0);
        }
    }

    fn add(&mut self, a: i64, b: i64, skip: Option<i64>) {
        if a > b {
            return;
        }
        self.ensure(a, b);
        for c in a..=b {
            if Some(c) != skip {
                self.v[(c - self.lo) as usize] += 1;
            }
        }
    }

    fn get(&self, c: i64) -> u64 {
        let i = c - self.lo;
        if i < 0 || i as usize >= self.v.len() {
            0
        } else {
            self.v[i as usize]
        }
    }

    fn range(&self) -> Option<(i64, i64)> {
        (!self.v.is_empty()).then(|| (self.lo, self.lo + self.v.len() as i64 - 1))
    }

    fn max_with(&mut self, o: &Counts) {
        if let Some((a, b)) = o.range() {
            self.ensure(a, b);
            for c in a..=b {
                let i = (c - self.lo) as usize;
                self.v[i] = self.v[i].max(o.get(c));
            }
        }
    }

    fn max(&self) -> u64 {
        self.v.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
struct AState {
    alive: bool,
    env: Vec<Option<i64>>,
    head: (i64, i64),
    shift: i64,
    visits: Counts,
    halted: Counts,
}

impl AState {
    fn halt(&mut self) {
        if !self.alive {
            return;
        }
        let mut v = self.visits.clone();
        v.add(self.head.0 + self.shift, self.head.1 + self.shift, None);
        self.halted.max_with(&v);
        self.alive = false;
    }

    fn join(mut self, o: AState) -> AState {
        self.halted.max_with(&o.halted);
        match (self.alive, o.alive) {
            (false, false) => {
                self.visits.max_with(&o.visits);
                self
            }
            (true, false) => self,
            (false, true) => {
                let mut o = o;
                o.halted = self.halted;
                o
            }
            (true, true) => {
                debug_assert_eq!(self.shift, o.shift);
                self.visits.max_with(&o.visits);
                self.head = (self.head.0.min(o.head.0), self.head.1.max(o.head.1));
                for (a, b) in self.env.iter_mut().zip(&o.env) {
                    if *a != *b {
                        *a = None;
                    }
                }
                self
            }
        }
    }
}

fn analyze(n: &Node, mut s: AState) -> Result<AState, BoundError> {
    if !s.alive {
        return Ok(s);
    }
    Ok(match n {
        Node::Seq(v) => {
            for x in v {
                s = analyze(x, s)?;
                if !s.alive {
                    break;
                }
            }
            s
        }
        Node::MoveTo(e) => {
            let t = e
                .eval_partial(&s.env)
                .ok_or_else(|| BoundError::UnknownTarget(format!("{e:?}")))?;
            let (lo, hi) = s.head;
            if !(lo == t && hi == t) {
                s.visits.add(lo.min(t) + s.shift, hi.max(t) + s.shift, Some(t + s.shift));
            }
            s.head = (t, t);
            s
        }
        Node::ReadBit { then, els, .. } => {
            let mut h = s.clone();
            h.halt();
            let a = analyze(then, s.clone())?;
            let b = analyze(els, s)?;
            a.join(b).join(h)
        }
        Node::MatchSymbol(arms) => {
            let mut h = s.clone();
            h.halt();
            let mut acc = h;
            for (_, body) in arms {
                acc = acc.join(analyze(body, s.clone())?);
            }
            acc
        }
        Node::WriteBit { .. } | Node::WriteSymbol(_) => s,
        Node::ForStateIndex { var, bound, body } => {
            for i in 0..*bound {
                s.env[*var] = Some(i);
                s = analyze(body, s)?;
                if !s.alive {
                    return Ok(s);
                }
            }
            s.env[*var] = Some(0);
            s
        }
        Node::IfTransition { cond, then, els } => {
            let known: Option<Vec<i64>> = if cond.deps.iter().all(|&v| s.env[v].is_some()) {
                Some(s.env.iter().map(|x| x.unwrap_or(0)).collect())
            } else {
                None
            };
            match known {
                Some(env) => analyze(if cond.eval(&env) { then } else { els }, s)?,
                None => {
                    let a = analyze(then, s.clone())?;
                    a.join(analyze(els, s)?)
                }
            }
        }
        Node::SetFlag { var, value } => {
            s.env[*var] = Some(*value);
            s
        }
        Node::TestFlag { var, then, els } => match s.env[*var] {
            Some(x) => analyze(if x != 0 { then } else { els }, s)?,
            None => {
                let a = analyze(then, s.clone())?;
                a.join(analyze(els, s)?)
            }
        },
        Node::RepeatWhileFlag {
            flag,
            max_passes,
            body,
        } => {
            let mut exits: Option<AState> = None;
            for _ in 0..*max_passes {
                s.env[*flag] = Some(0);
                s = analyze(body, s)?;
                if !s.alive {
                    break;
                }
                match s.env[*flag] {
                    Some(0) => {
                        let e = s.clone();
                        exits = Some(match exits {
                            Some(x) => x.join(e),
                            None => e,
                        });
                        s.alive = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        let mut e = s.clone();
                        e.env[*flag] = Some(0);
                        exits = Some(match exits {
                            Some(x) => x.join(e),
                            None => e,
                        });
                    }
                }
            }
            // The last pass is the final one even if it set the flag.
            if s.alive {
                s.env[*flag] = Some(0);
                exits = Some(match exits {
                    Some(x) => x.join(s),
                    None => s,
                });
                exits.unwrap()
            } else {
                match exits {
                    Some(x) => x.join(s),
                    None => s,
                }
            }
        }
        Node::Call { body, .. } => analyze(body, s)?,
        Node::Forever(_) => return Err(BoundError::NestedForever),
        Node::ShiftWindow(d) => {
            s.shift += d;
            s.head = (s.head.0 - d, s.head.1 - d);
            s
        }
        Node::Accept | Node::Reject => {
            s.halt();
            s
        }
    })
}

/// A static upper bound on the number of times any tape cell is left
/// during any run of the compiled program.
pub fn static_visit_bound(p: &Program) -> Result<u64, BoundError> {
    let env0: Vec<Option<i64>> = p.initial_env().into_iter().map(Some).collect();
    let start = AState {
        alive: true,
        env: env0,
        head: (p.start, p.start),
        shift: 0,
        visits: Counts::default(),
        halted: Counts::default(),
    };
    let (init, forever) = match &p.body {
        Node::Seq(v) if matches!(v.last(), Some(Node::Forever(_))) => {
            let Some(Node::Forever(b)) = v.last() else { unreachable!() };
            (Node::Seq(v[..v.len() - 1].to_vec()), Some(b))
        }
        Node::Forever(b) => (Node::nop(), Some(b)),
        b => (b.clone(), None),
    };
    let s0 = analyze(&init, start)?;
    let mut init_counts = s0.visits.clone();
    init_counts.max_with(&s0.halted);
    let Some(body) = forever else {
        return Ok(init_counts.max());
    };
    if !s0.alive {
        return Ok(init_counts.max());
    }
    // One iteration in iteration-start coordinates, from a head interval and
    // environment covering every iteration start.
    let mut entry = AState {
        alive: true,
        env: s0.env.clone(),
        head: s0.head,
        shift: 0,
        visits: Counts::default(),
        halted: Counts::default(),
    };
    let (per_iter, shift) = loop {
        let out = analyze(body, entry.clone())?;
        let mut v = out.visits.clone();
        v.max_with(&out.halted);
        if !out.alive {
            break (v, 1);
        }
        if out.shift < 1 {
            return Err(BoundError::NonAdvancingLoop);
        }
        let head = (entry.head.0.min(out.head.0), entry.head.1.max(out.head.1));
        let mut env = entry.env.clone();
        for (a, b) in env.iter_mut().zip(&out.env) {
            if *a != *b {
                *a = None;
            }
        }
        if head == entry.head && env == entry.env {
            break (v, out.shift);
        }
        entry.head = head;
        entry.env = env;
    };
    let _ = shift;
    // A cell at iteration-start coordinate x in the first iteration sits at
    // x − i·D in iteration i, so its visits in the loop are at most the sum
    // of the per-iteration visits at coordinates ≤ x.
    let total: u64 = per_iter.v.iter().sum();
    let mut best = total;
    if let Some((a, b)) = init_counts.range() {
        for x in a..=b {
            let below: u64 = per_iter
                .range()
                .map(|(lo, hi)| (lo..=hi.min(x)).map(|c| per_iter.get(c)).sum())
                .unwrap_or(0);
            best = best.max(init_counts.get(x) + below);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::ir::{cst, var, TrackAlphabet};

    fn prog(body: Node, seg: (i64, i64)) -> Program {
        let mut p = Program::new("t", &['a'], TrackAlphabet::new(1, 1));
        p.segment = seg;
        p.body = body;
        p
    }

    #[test]
    fn straight_walk_counts_once() {
        let p = prog(Node::seq(vec![Node::move_to(cst(5)), Node::Accept]), (0, 5));
        // Cells 0..4 left once, plus the halt charge on cell 5.
        assert_eq!(static_visit_bound(&p).unwrap(), 1);
    }

    #[test]
    fn loop_unrolls() {
        let mut p = prog(Node::nop(), (0, 3));
        let i = p.declare("i", 3);
        p.body = Node::seq(vec![
            Node::for_each(i, 3, Node::seq(vec![Node::move_to(cst(3)), Node::move_to(var(i))])),
            Node::Accept,
        ]);
        // Cell 0 is left at i=0 (to 3); cell 1 is passed in four walks...
        let k = static_visit_bound(&p).unwrap();
        assert!(k >= 4 && k <= 6, "{k}");
    }

    #[test]
    fn forever_sums_window() {
        let p = prog(
            Node::Forever(Box::new(Node::seq(vec![
                Node::move_to(cst(0)),
                Node::move_to(cst(1)),
                Node::ShiftWindow(1),
            ]))),
            (0, 1),
        );
        // Each iteration leaves coordinate 0 once and every cell passes
        // through coordinate 0 exactly once.
        assert_eq!(static_visit_bound(&p).unwrap(), 1);
    }
}
