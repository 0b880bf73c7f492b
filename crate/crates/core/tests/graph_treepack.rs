mod common;

use common::*;
use symiso_core::treepack::{check_admissible, find_tree_pair, TreeMode};
use symiso_core::verify::oracle_tree_decomposition;
use symiso_core::{Edge, FailureReason, Graph, GroupCase, SymError, SymmetricGraph, TreePair};

#[test]
fn symmetric_graph_validation() {
    let w = w5(GroupCase::C2);
    assert_eq!(w.group_order(), 2);
    let k3 = graph(3, "01 12 02");
    let id = SymmetricGraph::new(k3.clone(), GroupCase::C2, vec![0, 1, 2]).unwrap();
    assert_eq!(id.fixed_edges(1).len(), 3);
    assert!(matches!(
        SymmetricGraph::new(k3, GroupCase::C2, vec![1, 2, 0]),
        Err(SymError::WrongOrder { .. })
    ));
    let bad = SymmetricGraph::new(
        graph(5, "12 23 34 41 01 02 03 04"),
        GroupCase::C2,
        vec![0, 2, 1, 3, 4],
    );
    assert!(matches!(bad, Err(SymError::NotAutomorphism(_))));
    assert!(matches!(
        SymmetricGraph::new(graph(3, "01 12"), GroupCase::C2, vec![0, 0, 2]),
        Err(SymError::NotBijection)
    ));
}

#[test]
fn fixed_elements() {
    let w = w5(GroupCase::CsPreserving);
    assert_eq!(w.fixed_vertices(1).into_iter().collect::<Vec<_>>(), vec![0]);
    assert!(w.fixed_edges(1).is_empty());
    let k2 = SymmetricGraph::new(graph(2, "01"), GroupCase::C2, vec![0, 1]).unwrap();
    assert_eq!(k2.fixed_vertices(1).len(), 2);
    assert_eq!(k2.fixed_edges(1).len(), 1);
    let d = quarter8();
    assert!(d.fixed_edges(1).is_empty());
    assert_eq!(d.fixed_edges(2), edge_set("02 13"));
}

#[test]
fn orbits() {
    let w = w5(GroupCase::CsPreserving);
    let o = w.orbits();
    assert_eq!(o.edge_orbits.len(), 4);
    assert!(o.edge_orbits.iter().all(|orb| orb.len() == 2));
    let id = SymmetricGraph::identity(graph(4, "01 12 23 30"), GroupCase::C2);
    assert!(id.orbits().edge_orbits.iter().all(|orb| orb.len() == 1));
    let d = quarter8().orbits();
    let mut sizes: Vec<usize> = d.edge_orbits.iter().map(|o| o.len()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![2, 4, 4, 4]);
    let pair = d.edge_orbits.iter().find(|o| o.len() == 2).unwrap();
    assert_eq!(
        pair.iter()
            .copied()
            .collect::<std::collections::BTreeSet<Edge>>(),
        edge_set("02 13")
    );
}

#[test]
fn symmetric_neighbourhood() {
    let w = w5(GroupCase::CsPreserving);
    let s = w.symmetric_neighborhood(1).unwrap();
    assert_eq!(s.vertices.len(), 5);
    assert_eq!(s.edges.len(), 8);
    // a fixed vertex with a single neighbour
    let p = SymmetricGraph::new(graph(4, "01 12 13"), GroupCase::C2, vec![0, 1, 3, 2]).unwrap();
    let s = p.symmetric_neighborhood(0).unwrap();
    assert_eq!(s.vertices, [0, 1].into_iter().collect());
    assert_eq!(s.edges, edge_set("01"));
    assert_eq!(w.neighborhood_intersection(1).unwrap(), 3);
    assert!(matches!(
        w.neighborhood_intersection(0),
        Err(SymError::WrongDegree { degree: 4, .. })
    ));
}

#[test]
fn wheel_tree_pairs() {
    let w = w5(GroupCase::CsPreserving);
    let pair = TreePair {
        tree1: edge_set("23 30 01 14"),
        tree2: edge_set("12 20 04 43"),
        mode: TreeMode::Invariant,
    };
    pair.validate(&w).unwrap();
    let found = find_tree_pair(&w, TreeMode::Invariant).unwrap();
    found.validate(&w).unwrap();
    let r = check_admissible(&w);
    assert!(r.admissible);
    assert_eq!(r.fixed_edge_count, 0);
    assert_eq!(r.fixed_vertex_count, 1);
}

#[test]
fn k4_involutions() {
    // A double transposition fixes two edges of K4 yet still leaves an
    // invariant pair; a single transposition fixes one edge and leaves none.
    let k4 = graph(4, "01 02 03 12 13 23");
    let double = SymmetricGraph::new(k4.clone(), GroupCase::C2, vec![1, 0, 3, 2]).unwrap();
    assert_eq!(double.fixed_edges(1).len(), 2);
    let pair = find_tree_pair(&double, TreeMode::Invariant).unwrap();
    pair.validate(&double).unwrap();
    assert!(check_admissible(&double).admissible);
    let as_cs = SymmetricGraph::new(k4.clone(), GroupCase::CsPreserving, vec![1, 0, 3, 2]).unwrap();
    assert_eq!(
        check_admissible(&as_cs).failure_reason,
        Some(FailureReason::FixedEdgeRule)
    );
    let single = SymmetricGraph::new(k4.clone(), GroupCase::C2, vec![1, 0, 2, 3]).unwrap();
    assert!(find_tree_pair(&single, TreeMode::Invariant).is_none());
    assert!(oracle_tree_decomposition(&k4));
}

#[test]
fn edge_count_failures() {
    let g = Graph::new(
        5,
        [
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 1),
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 3),
        ],
    )
    .unwrap();
    let sg = SymmetricGraph::new(g, GroupCase::C2, vec![0, 3, 4, 1, 2]).unwrap();
    let r = check_admissible(&sg);
    assert!(!r.admissible);
    assert_eq!(r.failure_reason, Some(FailureReason::EdgeCount));
    assert_eq!(r.fixed_edge_count, 1);
    assert!(find_tree_pair(&sg, TreeMode::Invariant).is_none());
}

#[test]
fn sample_graphs_are_admissible() {
    for (sg, fixed) in [
        (wheel_mirror(), 0),
        (swap6(), 0),
        (halfturn7(), 0),
        (quarter8(), 2),
        (hat6(), 2),
        (k4_c2(), 2),
    ] {
        let r = check_admissible(&sg);
        assert!(r.admissible, "{:?}", sg.case());
        assert_eq!(r.fixed_edge_count, fixed);
        r.tree_pair.unwrap().validate(&sg).unwrap();
    }
    assert_eq!(
        find_tree_pair(&swap6(), TreeMode::Swapped).unwrap().mode,
        TreeMode::Swapped
    );
}

#[test]
fn oracle_values() {
    assert!(oracle_tree_decomposition(w5(GroupCase::C2).graph()));
    assert!(!oracle_tree_decomposition(&graph(4, "01 12 23")));
    // two triangles sharing a vertex: 6 edges but 5 vertices
    assert!(!oracle_tree_decomposition(&graph(5, "01 02 12 03 04 34")));
    // K5 minus an edge is overfull and the pendant vertex can't help
    assert!(!oracle_tree_decomposition(&graph(
        6,
        "01 02 03 04 12 13 14 23 24 05"
    )));
}
