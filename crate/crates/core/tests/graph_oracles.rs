//! Independent oracles built on petgraph: acceptance as plain graph
//! reachability, and weight-reduction as acyclicity of the rewrite graph.

use hennie::automata::{accepts_2nfa, end_marked_tape, successors, ConfigNode, TwoWayNfa};
use hennie::constructions::{build_2nfa_to_wrdtm, sliding_machine, update::WindowKind};
use hennie::harness::{random_2nfa, words_of_length, GeneratorSpec};
use hennie::tm::{check_weight_reducing, rewrite_graph, Dtm, MachineCore};
use petgraph::algo::{has_path_connecting, is_cyclic_directed};
use petgraph::graph::{DiGraph, NodeIndex};

fn accepts_by_petgraph(a: &TwoWayNfa, w: &[usize]) -> bool {
    let tape = end_marked_tape(w);
    let width = tape.len() + 1;
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<NodeIndex> = (0..a.num_states() * width).map(|_| g.add_node(())).collect();
    let id = |c: ConfigNode| nodes[c.state * width + c.position];
    for state in 0..a.num_states() {
        for position in 0..tape.len() {
            let from = ConfigNode { state, position };
            for to in successors(a, &tape, from) {
                g.add_edge(id(from), id(to), ());
            }
        }
    }
    let start = id(ConfigNode { state: a.initial(), position: 0 });
    (0..a.num_states())
        .filter(|&q| a.is_final(q))
        .any(|q| has_path_connecting(&g, start, id(ConfigNode { state: q, position: tape.len() }), None))
}

#[test]
fn bfs_oracle_matches_graph_reachability() {
    for seed in 0..30 {
        let n = 1 + seed as usize % 4;
        let a = random_2nfa(&GeneratorSpec::new(n, 2, seed).with_density(0.35));
        for len in 0..=6 {
            for w in words_of_length(2, len) {
                assert_eq!(accepts_2nfa(&a, &w).unwrap(), accepts_by_petgraph(&a, &w), "seed {seed} word {w:?}");
            }
        }
    }
}

fn rewrite_cycle_by_petgraph<M: MachineCore + ?Sized>(m: &M) -> bool {
    let edges = rewrite_graph(m);
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<NodeIndex> = edges.iter().map(|_| g.add_node(())).collect();
    for (s, out) in edges.iter().enumerate() {
        for &t in out {
            g.add_edge(nodes[s], nodes[t as usize], ());
        }
    }
    is_cyclic_directed(&g)
}

#[test]
fn weight_reduction_is_acyclicity() {
    for seed in 0..4 {
        let a = random_2nfa(&GeneratorSpec::new(1 + seed as usize % 2, 2, seed));
        // The bare sliding machine rewrites its window cells in place.
        let raw = Dtm::Table(sliding_machine(&a, WindowKind::Wide).unwrap().machine);
        assert!(rewrite_cycle_by_petgraph(&raw));
        assert!(!check_weight_reducing(&raw).is_valid());
        // After the countdown pass the explicit table is acyclic.
        let wr = build_2nfa_to_wrdtm(&a).unwrap().materialize(1 << 24).unwrap();
        assert!(!rewrite_cycle_by_petgraph(&wr));
        assert!(check_weight_reducing(&Dtm::Table(wr)).is_valid());
    }
}
