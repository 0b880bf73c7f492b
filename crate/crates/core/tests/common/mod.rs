#![allow(dead_code)]

use std::collections::BTreeSet;

use symiso_core::{Edge, Graph, GroupCase, SymmetricGraph};

pub fn graph(n: usize, edges: &str) -> Graph {
    Graph::new(n, parse(edges)).unwrap()
}

// "01 12 ..." with single-digit vertex ids.
pub fn parse(edges: &str) -> Vec<(usize, usize)> {
    edges
        .split_whitespace()
        .map(|p| {
            let d: Vec<usize> = p
                .chars()
                .map(|c| c.to_digit(10).unwrap() as usize)
                .collect();
            (d[0], d[1])
        })
        .collect()
}

pub fn edge_set(edges: &str) -> BTreeSet<Edge> {
    parse(edges)
        .into_iter()
        .map(|(a, b)| Edge::new(a, b))
        .collect()
}

pub fn sym(n: usize, edges: &str, case: GroupCase, action: &[usize]) -> SymmetricGraph {
    SymmetricGraph::new(graph(n, edges), case, action.to_vec()).unwrap()
}

/// Hub 0, rim 1-2-3-4, action 1↔3, 2↔4.
pub fn w5(case: GroupCase) -> SymmetricGraph {
    sym(5, "12 23 34 41 01 02 03 04", case, &[0, 3, 4, 1, 2])
}

pub fn wheel_mirror() -> SymmetricGraph {
    sym(
        5,
        "01 02 03 04 13 24 32 41",
        GroupCase::CsPreserving,
        &[0, 2, 1, 4, 3],
    )
}

pub fn swap6() -> SymmetricGraph {
    sym(
        6,
        "04 02 05 14 13 15 42 25 43 35",
        GroupCase::CsSwapping,
        &[1, 0, 3, 2, 5, 4],
    )
}

pub fn halfturn7() -> SymmetricGraph {
    sym(
        7,
        "01 02 03 04 12 23 34 41 51 54 62 63",
        GroupCase::C2,
        &[0, 3, 4, 1, 2, 6, 5],
    )
}

pub fn quarter8() -> SymmetricGraph {
    sym(
        8,
        "01 12 32 03 02 31 45 56 76 47 40 51 73 62",
        GroupCase::C4,
        &[1, 2, 3, 0, 5, 6, 7, 4],
    )
}

/// Half-turn with two fixed edges, 0-2 and 1-3.
pub fn hat6() -> SymmetricGraph {
    sym(
        6,
        "01 12 23 30 40 43 51 52 02 13",
        GroupCase::C2,
        &[2, 3, 0, 1, 5, 4],
    )
}

pub fn k4_c2() -> SymmetricGraph {
    sym(4, "01 02 03 12 13 23", GroupCase::C2, &[2, 3, 0, 1])
}
