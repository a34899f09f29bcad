//! The table-update program and the sliding-window simulation built from it.
//!
//! The tables (γ_z, τ_z) are stored as bits on tape tracks. One update step
//! computes, for every source state p, the set Z_p of states reachable on
//! the new cell (a saturation loop over the old τ), derives the new τ row
//! from the right moves out of Z_p, and finally the new γ by composing the
//! old γ with the new τ.

use crate::automata::{ReachTables, TapeSymbol, TwoWayNfa};
use crate::builder::{cst, var, Expr, Node, Pred, Program, SymClass, TrackAlphabet, Var};
use crate::tm::input_sym;
use crate::Dir;
use std::sync::Arc;

/// A bit array on one track starting at `base`: entry `i` at `base + i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    pub track: usize,
    pub base: i64,
}

impl Region {
    fn cell(&self, i: Expr) -> Expr {
        cst(self.base) + i
    }
}

/// Where one update reads its input tables and writes its output tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub old_gamma: Region,
    /// Row-major: (p, q) at `base + p·n + q`.
    pub old_tau: Region,
    pub new_gamma: Region,
    pub new_tau: Region,
    /// Scratch for Z_p; it must not overlap the old tables or the new τ, and
    /// may overlap the new γ (written last).
    pub z: Region,
    /// Scratch for the acceptance probe; must not overlap the new tables.
    pub probe: Region,
}

impl Layout {
    /// ⊢uv⊣ with plain bits: old tables on track 0, new ones on track 1 of
    /// the same cells.
    pub fn standalone(n: usize) -> Layout {
        let g = |t| Region { track: t, base: 1 };
        let tau = |t| Region {
            track: t,
            base: 1 + n as i64,
        };
        Layout {
            n,
            old_gamma: g(0),
            old_tau: tau(0),
            new_gamma: g(1),
            new_tau: tau(1),
            z: g(1),
            probe: g(0),
        }
    }

    /// Window of n + n² cells: γ then τ on track `x`; the new tables go one
    /// cell to the right on track `y`.
    pub fn wide(n: usize, x: usize, y: usize) -> Layout {
        let n64 = n as i64;
        Layout {
            n,
            old_gamma: Region { track: x, base: 0 },
            old_tau: Region { track: x, base: n64 },
            new_gamma: Region { track: y, base: 1 },
            new_tau: Region { track: y, base: n64 + 1 },
            z: Region { track: y, base: 1 },
            probe: Region { track: x, base: 1 },
        }
    }

    /// Window of n² cells: γ on its own track over the first n cells, τ over
    /// all n². Tracks (gx, tx) hold the old tables, (gy, ty) the new ones.
    pub fn compact(n: usize, gx: usize, tx: usize, gy: usize, ty: usize) -> Layout {
        Layout {
            n,
            old_gamma: Region { track: gx, base: 0 },
            old_tau: Region { track: tx, base: 0 },
            new_gamma: Region { track: gy, base: 1 },
            new_tau: Region { track: ty, base: 1 },
            z: Region { track: gy, base: 1 },
            probe: Region { track: gx, base: 1 },
        }
    }

    fn tau_cell(r: Region, n: usize, p: Expr, q: Expr) -> Expr {
        cst(r.base) + p * cst(n as i64) + q
    }
}

/// Loop variables used by the update.
#[derive(Clone, Copy, Debug)]
pub struct UpdateVars {
    pub p: Var,
    pub q: Var,
    pub r: Var,
    pub s: Var,
    pub r2: Var,
    pub changed: Var,
    pub found: Var,
}

impl UpdateVars {
    pub fn declare(prog: &mut Program, n: usize) -> Self {
        let n = n as i64;
        UpdateVars {
            p: prog.declare("p", n),
            q: prog.declare("q", n),
            r: prog.declare("r", n),
            s: prog.declare("s", n),
            r2: prog.declare("r'", n),
            changed: prog.declare("changed", 2),
            found: prog.declare("found", 2),
        }
    }
}

fn has_move(a: &Arc<TwoWayNfa>, from: Var, x: TapeSymbol, to: Var, d: Dir, label: &str) -> Pred {
    let a = a.clone();
    Pred::new(
        format!("({label}) in delta"),
        vec![from, to],
        move |e| a.has_move(e[from] as usize, x, e[to] as usize, d),
    )
}

fn write_flag(region_track: usize, flag: Var) -> Node {
    Node::test(flag, Node::write_bit(region_track, true), Node::write_bit(region_track, false))
}

/// Saturates the set stored in `set` over the symbol `x` using the τ table
/// in `tau`: repeatedly, for r in the set and every left move (s, L) on x
/// from r, adds every r′ with (s, r′) ∈ τ.
fn saturate(
    a: &Arc<TwoWayNfa>,
    v: &UpdateVars,
    x: TapeSymbol,
    set: Region,
    tau: Region,
    max_passes: u64,
) -> Node {
    let n = a.num_states();
    let ni = n as i64;
    let add_r2 = Node::seq(vec![
        Node::move_to(set.cell(var(v.r2))),
        Node::read_bit(
            set.track,
            Node::nop(),
            Node::seq(vec![Node::write_bit(set.track, true), Node::set(v.changed, 1)]),
        ),
    ]);
    let over_r2 = Node::for_each(
        v.r2,
        ni,
        Node::seq(vec![
            Node::move_to(Layout::tau_cell(tau, n, var(v.s), var(v.r2))),
            Node::read_bit(tau.track, add_r2, Node::nop()),
        ]),
    );
    let over_s = Node::for_each(
        v.s,
        ni,
        Node::if_(has_move(a, v.r, x, v.s, Dir::L, "r,x,s,L"), over_r2),
    );
    let pass = Node::for_each(
        v.r,
        ni,
        Node::seq(vec![
            Node::move_to(set.cell(var(v.r))),
            Node::read_bit(set.track, over_s, Node::nop()),
        ]),
    );
    Node::repeat_while(v.changed, max_passes, pass)
}

/// One table update for the symbol `x` (an input letter or ⊣) on `layout`.
pub fn update_node(a: &Arc<TwoWayNfa>, v: &UpdateVars, layout: &Layout, x: TapeSymbol) -> Node {
    let n = a.num_states();
    let ni = n as i64;
    let l = layout;
    let p_is_r = {
        let (p, r) = (v.p, v.r);
        Pred::new("r = p", vec![p, r], move |e| e[p] == e[r])
    };
    let init_z = Node::for_each(
        v.r,
        ni,
        Node::seq(vec![
            Node::move_to(l.z.cell(var(v.r))),
            Node::if_else(
                p_is_r,
                Node::write_bit(l.z.track, true),
                Node::write_bit(l.z.track, false),
            ),
        ]),
    );
    let sat = saturate(a, v, x, l.z, l.old_tau, n as u64);
    // τ′(p, q) iff some r in Z_p moves right into q.
    let row = Node::for_each(
        v.q,
        ni,
        Node::seq(vec![
            Node::for_each(
                v.r,
                ni,
                Node::if_(
                    has_move(a, v.r, x, v.q, Dir::R, "r,x,q,R"),
                    Node::seq(vec![
                        Node::move_to(l.z.cell(var(v.r))),
                        Node::read_bit(l.z.track, Node::set(v.found, 1), Node::nop()),
                    ]),
                ),
            ),
            Node::move_to(Layout::tau_cell(l.new_tau, n, var(v.p), var(v.q))),
            write_flag(l.new_tau.track, v.found),
            Node::set(v.found, 0),
        ]),
    );
    let tau_phase = Node::for_each(
        v.p,
        ni,
        Node::seq(vec![
            Node::call("init-z", init_z),
            Node::call("saturate", sat),
            Node::call("tau-row", row),
        ]),
    );
    // γ′(q) iff some p in γ has τ′(p, q).
    let gamma_phase = Node::for_each(
        v.q,
        ni,
        Node::seq(vec![
            Node::for_each(
                v.p,
                ni,
                Node::seq(vec![
                    Node::move_to(l.old_gamma.cell(var(v.p))),
                    Node::read_bit(
                        l.old_gamma.track,
                        Node::seq(vec![
                            Node::move_to(Layout::tau_cell(l.new_tau, n, var(v.p), var(v.q))),
                            Node::read_bit(l.new_tau.track, Node::set(v.found, 1), Node::nop()),
                        ]),
                        Node::nop(),
                    ),
                ]),
            ),
            Node::move_to(l.new_gamma.cell(var(v.q))),
            write_flag(l.new_gamma.track, v.found),
            Node::set(v.found, 0),
        ]),
    );
    Node::seq(vec![Node::call("tau", tau_phase), Node::call("gamma", gamma_phase)])
}

/// Sets `acc` iff the new tables accept when followed by ⊣: saturates the
/// new γ over ⊣ in the probe scratch and tests for a right move from it into
/// a final state.
pub fn probe_node(a: &Arc<TwoWayNfa>, v: &UpdateVars, layout: &Layout, acc: Var) -> Node {
    let n = a.num_states();
    let ni = n as i64;
    let l = layout;
    let copy = Node::for_each(
        v.r,
        ni,
        Node::seq(vec![
            Node::move_to(l.new_gamma.cell(var(v.r))),
            Node::read_bit(l.new_gamma.track, Node::set(v.found, 1), Node::nop()),
            Node::move_to(l.probe.cell(var(v.r))),
            write_flag(l.probe.track, v.found),
            Node::set(v.found, 0),
        ]),
    );
    let sat = saturate(a, v, TapeSymbol::RightEnd, l.probe, l.new_tau, n as u64 + 1);
    let exits = {
        let a = a.clone();
        let r = v.r;
        Pred::new("r exits right into F", vec![r], move |e| {
            a.delta(e[r] as usize, TapeSymbol::RightEnd)
                .iter()
                .any(|&(q, d)| d == Dir::R && a.is_final(q))
        })
    };
    let test = Node::for_each(
        v.r,
        ni,
        Node::if_(
            exits,
            Node::seq(vec![
                Node::move_to(l.probe.cell(var(v.r))),
                Node::read_bit(l.probe.track, Node::set(acc, 1), Node::nop()),
            ]),
        ),
    );
    Node::seq(vec![
        Node::set(acc, 0),
        Node::call("probe-copy", copy),
        Node::call("probe-saturate", sat),
        Node::call("probe-test", test),
    ])
}

/// Standalone update machine program over the plain input alphabet {0, 1}:
/// the input is the bit word of (γ_z, τ_z); the machine rejects inputs of the
/// wrong length and otherwise halts accepting with the bit word of the
/// updated tables on the tape.
pub fn update_program(a: &TwoWayNfa, x: TapeSymbol) -> Program {
    let n = a.num_states();
    let len = (n + n * n) as i64;
    let a = Arc::new(a.clone());
    let mut tracks = TrackAlphabet::new(2, 2);
    tracks.input_proj = vec![0, 1];
    tracks.track_names = vec!["old".into(), "new".into()];
    let mut p = Program::new(format!("update[{x:?}]"), &['0', '1'], tracks);
    p.end_marked = true;
    p.segment = (0, len + 1);
    p.start = 0;
    let v = UpdateVars::declare(&mut p, n);
    let i = p.declare("i", len + 1);
    let layout = Layout::standalone(n);
    let check = Node::seq(vec![
        Node::for_each(
            i,
            len,
            Node::seq(vec![
                Node::move_to(var(i) + cst(1)),
                Node::MatchSymbol(vec![
                    (SymClass::Input(0), Node::nop()),
                    (SymClass::Input(1), Node::nop()),
                ]),
            ]),
        ),
        Node::move_to(cst(len + 1)),
        Node::MatchSymbol(vec![(SymClass::RightEnd, Node::nop())]),
    ]);
    let project = Node::for_each(
        i,
        len,
        Node::seq(vec![
            Node::move_to(var(i) + cst(1)),
            Node::read_bit(
                1,
                Node::WriteSymbol(input_sym(1)),
                Node::WriteSymbol(input_sym(0)),
            ),
        ]),
    );
    p.body = Node::seq(vec![
        Node::call("check", check),
        Node::call("update", update_node(&a, &v, &layout, x)),
        Node::call("project", project),
        Node::Accept,
    ]);
    p
}

/// Which table layout a sliding simulation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowKind {
    /// n + n² cells, two tracks.
    Wide,
    /// n² cells, four tracks.
    Compact,
}

impl WindowKind {
    pub fn len(self, n: usize) -> usize {
        match self {
            WindowKind::Wide => n + n * n,
            WindowKind::Compact => n * n,
        }
    }
}

/// The sliding simulation: the tables of ⊢ are written on the window to the
/// left of the input; then for each input symbol σ (read on the cell right of
/// the window) the tables of zσ are written one cell to the right on the
/// other track set, the acceptance probe refreshes `acc`, and the window
/// shifts by one. On the blank after the input the machine halts, accepting
/// iff `acc`.
pub fn sliding_program(a: &TwoWayNfa, kind: WindowKind) -> Program {
    let n = a.num_states();
    let len = kind.len(n) as i64;
    let arc = Arc::new(a.clone());
    let (tracks, layouts) = match kind {
        WindowKind::Wide => {
            let mut t = TrackAlphabet::new(2, a.alphabet().len());
            t.track_names = vec!["X".into(), "Y".into()];
            (t, [Layout::wide(n, 0, 1), Layout::wide(n, 1, 0)])
        }
        WindowKind::Compact => {
            let mut t = TrackAlphabet::new(4, a.alphabet().len());
            t.track_names = vec!["G0".into(), "T0".into(), "G1".into(), "T1".into()];
            (t, [Layout::compact(n, 0, 1, 2, 3), Layout::compact(n, 2, 3, 0, 1)])
        }
    };
    let name = match kind {
        WindowKind::Wide => "sliding-wide",
        WindowKind::Compact => "sliding-compact",
    };
    let mut p = Program::new(name, a.alphabet(), tracks);
    p.segment = (0, len);
    p.start = len;
    let v = UpdateVars::declare(&mut p, n);
    // ε is accepted iff the tables of ⊢⊣ contain a final state.
    let base = ReachTables::base(a);
    let eps = crate::automata::update_tables(a, &base, TapeSymbol::RightEnd)
        .expect("⊣ update of valid tables")
        .gamma()
        .into_iter()
        .any(|q| a.is_final(q));
    let acc = p.declare_init("acc", 2, eps as i64);

    // Initial tables, as constants, on the first track set.
    let l0 = layouts[0];
    let mut init = Vec::new();
    let put = |cell: i64, track: usize, bit: bool, init: &mut Vec<Node>| {
        init.push(Node::move_to(cst(cell)));
        init.push(Node::write_bit(track, bit));
    };
    for q in 0..n {
        put(l0.old_gamma.base + q as i64, l0.old_gamma.track, base.in_gamma(q), &mut init);
    }
    for pp in 0..n {
        for q in 0..n {
            let c = l0.old_tau.base + (pp * n + q) as i64;
            put(c, l0.old_tau.track, base.in_tau(pp, q), &mut init);
        }
    }

    let step = |layout: &Layout| {
        // The end of the input is a blank, or, on the empty input, the
        // initial cell which the start-up phase has already left once.
        let mut arms = vec![
            (SymClass::Blank, Node::test(acc, Node::Accept, Node::Reject)),
            (SymClass::Composite, Node::test(acc, Node::Accept, Node::Reject)),
        ];
        for (i, _) in a.alphabet().iter().enumerate() {
            arms.push((
                SymClass::Input(i),
                Node::seq(vec![
                    Node::set(acc, 0),
                    Node::call(
                        format!("update[{}]", a.alphabet()[i]),
                        update_node(&arc, &v, layout, TapeSymbol::Input(i)),
                    ),
                    Node::call("probe", probe_node(&arc, &v, layout, acc)),
                ]),
            ));
        }
        Node::seq(vec![
            Node::move_to(cst(len)),
            Node::MatchSymbol(arms),
            Node::ShiftWindow(1),
        ])
    };
    p.body = Node::seq(vec![
        Node::call("init", Node::seq(init)),
        Node::Forever(Box::new(Node::seq(vec![
            Node::call("even", step(&layouts[0])),
            Node::call("odd", step(&layouts[1])),
        ]))),
    ]);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts_2nfa, update_tables};
    use crate::builder::{compile, interpret, static_visit_bound, CompileOptions};
    use crate::harness::{random_2nfa, random_word, GeneratorSpec};
    use crate::tm::{run, run_with_tape, RunOptions};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tables(rng: &mut impl Rng, n: usize) -> ReachTables {
        let bits: Vec<bool> = (0..n + n * n).map(|_| rng.gen_bool(0.4)).collect();
        ReachTables::from_bits(n, &bits).unwrap()
    }

    fn output_bits(tape: &std::collections::BTreeMap<i64, crate::tm::Sym>, len: usize) -> Vec<bool> {
        (1..=len as i64).map(|c| tape.get(&c) == Some(&input_sym(1))).collect()
    }

    #[test]
    fn standalone_update_matches_table_calculus() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..6 {
            let n = 2 + seed as usize % 2;
            let a = random_2nfa(&GeneratorSpec::new(n, 2, seed).with_density(0.3));
            let x = if seed % 3 == 0 { TapeSymbol::RightEnd } else { TapeSymbol::Input(seed as usize % 2) };
            let prog = update_program(&a, x);
            let m = compile(&prog, CompileOptions::default()).unwrap().machine;
            for _ in 0..5 {
                let t = random_tables(&mut rng, n);
                let want = update_tables(&a, &t, x).unwrap().to_bits();
                let w: Vec<usize> = t.to_bits().iter().map(|&b| b as usize).collect();
                let i = interpret(&prog, &w, 1 << 24).unwrap();
                assert!(i.accepted);
                assert_eq!(output_bits(&i.tape, w.len()), want);
                let (r, tape) = run_with_tape(&m, &w, RunOptions::with_budget(1 << 24)).unwrap();
                assert!(r.accepted());
                assert_eq!(output_bits(&tape.contents(), w.len()), want);
            }
            // Wrong length is rejected.
            let r = run(&m, &[1, 0], RunOptions::with_budget(1 << 20)).unwrap();
            assert!(!r.accepted());
        }
    }

    #[test]
    fn sliding_wide_agrees_with_oracle() {
        for seed in 0..4 {
            let a = random_2nfa(&GeneratorSpec::new(2, 2, seed).with_density(0.35));
            let prog = sliding_program(&a, WindowKind::Wide);
            let k = static_visit_bound(&prog).unwrap();
            let m = compile(&prog, CompileOptions::default()).unwrap().machine;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for len in 0..7 {
                let w = random_word(&mut rng, 2, len);
                let want = accepts_2nfa(&a, &w).unwrap();
                assert_eq!(interpret(&prog, &w, 1 << 24).unwrap().accepted, want, "{seed} {w:?}");
                let r = run(&m, &w, RunOptions::with_budget(1 << 24)).unwrap();
                assert_eq!(r.accepted(), want, "{seed} {w:?}");
                assert!(r.max_visits() <= k, "{} > {k}", r.max_visits());
                assert_eq!(r.right_extra, 0);
                assert!(r.left_extra <= 6);
            }
        }
    }

    #[test]
    fn sliding_compact_agrees_with_oracle() {
        for seed in 0..3 {
            let a = random_2nfa(&GeneratorSpec::new(2, 2, seed + 10).with_density(0.35));
            let prog = sliding_program(&a, WindowKind::Compact);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for len in 0..7 {
                let w = random_word(&mut rng, 2, len);
                let want = accepts_2nfa(&a, &w).unwrap();
                assert_eq!(interpret(&prog, &w, 1 << 24).unwrap().accepted, want);
            }
        }
    }
}
