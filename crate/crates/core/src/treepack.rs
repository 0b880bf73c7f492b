//! Symmetric packings of two edge-disjoint spanning trees.
//!
//! The search assigns whole edge orbits at a time. In [`TreeMode::Invariant`]
//! an orbit goes entirely into one tree; in [`TreeMode::Swapped`] an orbit
//! `e, γe, γ²e, …` alternates between the trees with one binary phase per
//! orbit. Partial assignments are pruned with a rollback union-find.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::graph::{Edge, Graph, GroupCase, SymError, SymmetricGraph};
use crate::unionfind::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeMode {
    /// Each tree is mapped onto itself by the generator.
    Invariant,
    /// The generator exchanges the two trees.
    Swapped,
}

impl fmt::Display for TreeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeMode::Invariant => f.write_str("invariant"),
            TreeMode::Swapped => f.write_str("swapped"),
        }
    }
}

/// Two edge-disjoint spanning trees covering every edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreePair {
    pub tree1: BTreeSet<Edge>,
    pub tree2: BTreeSet<Edge>,
    pub mode: TreeMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreePairError {
    #[error("edge {0} lies in both trees")]
    Overlap(Edge),
    #[error("edge {0} of the graph lies in neither tree")]
    Uncovered(Edge),
    #[error("edge {0} is not an edge of the graph")]
    Foreign(Edge),
    #[error("tree {0} is not a spanning tree")]
    NotSpanningTree(u8),
    #[error("edge {0} breaks the {1} symmetry law")]
    Symmetry(Edge, TreeMode),
}

impl TreePair {
    pub fn swap(&self) -> TreePair {
        TreePair {
            tree1: self.tree2.clone(),
            tree2: self.tree1.clone(),
            mode: self.mode,
        }
    }

    /// Index (1 or 2) of the tree holding `e`.
    pub fn tree_of(&self, e: Edge) -> Option<u8> {
        if self.tree1.contains(&e) {
            Some(1)
        } else if self.tree2.contains(&e) {
            Some(2)
        } else {
            None
        }
    }

    pub fn tree(&self, index: u8) -> &BTreeSet<Edge> {
        if index == 1 {
            &self.tree1
        } else {
            &self.tree2
        }
    }

    /// Checks every invariant of a tree pair against `sg`, by depth-first
    /// search rather than union-find.
    pub fn validate(&self, sg: &SymmetricGraph) -> Result<(), TreePairError> {
        let g = sg.graph();
        if let Some(e) = self.tree1.intersection(&self.tree2).next() {
            return Err(TreePairError::Overlap(*e));
        }
        for e in self.tree1.iter().chain(self.tree2.iter()) {
            if !g.contains(*e) {
                return Err(TreePairError::Foreign(*e));
            }
        }
        for e in g.edges() {
            if !self.tree1.contains(e) && !self.tree2.contains(e) {
                return Err(TreePairError::Uncovered(*e));
            }
        }
        if !is_spanning_tree(g.order(), &self.tree1) {
            return Err(TreePairError::NotSpanningTree(1));
        }
        if !is_spanning_tree(g.order(), &self.tree2) {
            return Err(TreePairError::NotSpanningTree(2));
        }
        for &e in &self.tree1 {
            let img = sg.image_edge(e, 1);
            let ok = match self.mode {
                TreeMode::Invariant => self.tree1.contains(&img),
                TreeMode::Swapped => self.tree2.contains(&img),
            };
            if !ok {
                return Err(TreePairError::Symmetry(e, self.mode));
            }
        }
        for &e in &self.tree2 {
            let img = sg.image_edge(e, 1);
            let ok = match self.mode {
                TreeMode::Invariant => self.tree2.contains(&img),
                TreeMode::Swapped => self.tree1.contains(&img),
            };
            if !ok {
                return Err(TreePairError::Symmetry(e, self.mode));
            }
        }
        Ok(())
    }
}

/// True iff `edges` is a spanning tree of the vertex set `0..n`.
pub fn is_spanning_tree(n: usize, edges: &BTreeSet<Edge>) -> bool {
    if n == 0 {
        return edges.is_empty();
    }
    if edges.len() + 1 != n {
        return false;
    }
    let mut adj = alloc::vec![Vec::new(); n];
    for e in edges {
        if e.v() >= n {
            return false;
        }
        adj[e.u()].push(e.v());
        adj[e.v()].push(e.u());
    }
    let mut seen = alloc::vec![false; n];
    let mut stack = alloc::vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

// One orbit with its two admissible splits: for each option, the edges that
// go to tree 1 and to tree 2.
struct Unit {
    options: [(Vec<Edge>, Vec<Edge>); 2],
}

fn build_units(sg: &SymmetricGraph, mode: TreeMode) -> Option<Vec<Unit>> {
    let mut orbits = sg.orbits().edge_orbits;
    // largest orbit first, ties by smallest edge
    orbits.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut units = Vec::with_capacity(orbits.len());
    for orbit in orbits {
        match mode {
            TreeMode::Invariant => units.push(Unit {
                options: [(orbit.clone(), Vec::new()), (Vec::new(), orbit)],
            }),
            TreeMode::Swapped => {
                if orbit.len() % 2 == 1 {
                    return None;
                }
                let even: Vec<Edge> = orbit.iter().step_by(2).copied().collect();
                let odd: Vec<Edge> = orbit.iter().skip(1).step_by(2).copied().collect();
                units.push(Unit {
                    options: [(even.clone(), odd.clone()), (odd, even)],
                });
            }
        }
    }
    Some(units)
}

struct Search<'a, F> {
    n: usize,
    units: &'a [Unit],
    uf: [UnionFind; 2],
    chosen: Vec<usize>,
    mode: TreeMode,
    visit: F,
}

impl<F: FnMut(TreePair) -> bool> Search<'_, F> {
    fn add(&mut self, tree: usize, edges: &[Edge], counts: &mut [usize; 2]) -> bool {
        for e in edges {
            if !self.uf[tree].union(e.u(), e.v()) {
                return false;
            }
            counts[tree] += 1;
        }
        counts[tree] < self.n
    }

    // returns false once the visitor asks to stop
    fn run(&mut self, depth: usize, counts: [usize; 2]) -> bool {
        if depth == self.units.len() {
            let mut pair = TreePair {
                tree1: BTreeSet::new(),
                tree2: BTreeSet::new(),
                mode: self.mode,
            };
            for (unit, &opt) in self.units.iter().zip(&self.chosen) {
                pair.tree1.extend(unit.options[opt].0.iter().copied());
                pair.tree2.extend(unit.options[opt].1.iter().copied());
            }
            return (self.visit)(pair);
        }
        // the first unit only takes option 0: swapping the trees gives the rest
        let options: &[usize] = if depth == 0 { &[0] } else { &[0, 1] };
        for &opt in options {
            let snaps = [self.uf[0].snapshot(), self.uf[1].snapshot()];
            let mut c = counts;
            let units = self.units;
            let (t1, t2) = &units[depth].options[opt];
            let ok = self.add(0, t1, &mut c) && self.add(1, t2, &mut c);
            if ok {
                self.chosen.push(opt);
                let go_on = self.run(depth + 1, c);
                self.chosen.pop();
                if !go_on {
                    self.uf[0].rollback(snaps[0]);
                    self.uf[1].rollback(snaps[1]);
                    return false;
                }
            }
            self.uf[0].rollback(snaps[0]);
            self.uf[1].rollback(snaps[1]);
        }
        true
    }
}

/// Calls `visit` on every tree pair of the given mode, up to exchanging the
/// two trees. `visit` returns `false` to stop early.
pub fn for_each_tree_pair<F>(sg: &SymmetricGraph, mode: TreeMode, visit: F)
where
    F: FnMut(TreePair) -> bool,
{
    let g = sg.graph();
    let n = g.order();
    if n == 0 || g.size() != 2 * n - 2 {
        return;
    }
    let Some(units) = build_units(sg, mode) else {
        return;
    };
    let mut search = Search {
        n,
        units: &units,
        uf: [UnionFind::new(n), UnionFind::new(n)],
        chosen: Vec::new(),
        mode,
        visit,
    };
    if units.is_empty() {
        // single vertex: two empty trees
        (search.visit)(TreePair {
            tree1: BTreeSet::new(),
            tree2: BTreeSet::new(),
            mode,
        });
        return;
    }
    search.run(0, [0, 0]);
}

/// First tree pair found in the given mode, if any.
pub fn find_tree_pair(sg: &SymmetricGraph, mode: TreeMode) -> Option<TreePair> {
    let mut found = None;
    for_each_tree_pair(sg, mode, |pair| {
        found = Some(pair);
        false
    });
    found
}

/// Every tree pair of the given mode, in both tree orders.
pub fn all_tree_pairs(sg: &SymmetricGraph, mode: TreeMode) -> Vec<TreePair> {
    let mut out = Vec::new();
    for_each_tree_pair(sg, mode, |pair| {
        out.push(pair.swap());
        out.push(pair);
        true
    });
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureReason {
    EdgeCount,
    FixedEdgeRule,
    NoPacking,
    InvalidAction(SymError),
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::EdgeCount => f.write_str("edge count is not 2|V|-2"),
            FailureReason::FixedEdgeRule => f.write_str("fixed-edge count not allowed"),
            FailureReason::NoPacking => f.write_str("no symmetric spanning-tree packing"),
            FailureReason::InvalidAction(e) => write!(f, "invalid action: {e}"),
        }
    }
}

/// Outcome of the combinatorial condition check for one symmetry case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub case: GroupCase,
    pub admissible: bool,
    pub tree_pair: Option<TreePair>,
    /// Edges fixed by `γ` (or by `γ²` for the quarter-turn case).
    pub fixed_edge_count: usize,
    /// Vertices fixed by `γ`. Reported only; no rule is attached to it.
    pub fixed_vertex_count: usize,
    pub failure_reason: Option<FailureReason>,
}

/// Decides the combinatorial condition for the case recorded in `sg`.
pub fn check_admissible(sg: &SymmetricGraph) -> AdmissibilityReport {
    let case = sg.case();
    let g = sg.graph();
    let fixed_edge_count = sg.fixed_edges(case.fixed_edge_power()).len();
    let fixed_vertex_count = sg.fixed_vertices(1).len();
    let mut report = AdmissibilityReport {
        case,
        admissible: false,
        tree_pair: None,
        fixed_edge_count,
        fixed_vertex_count,
        failure_reason: None,
    };
    let n = g.order();
    if n == 0 || g.size() != 2 * n - 2 {
        report.failure_reason = Some(FailureReason::EdgeCount);
        return report;
    }
    if !case.allows_fixed_edges(fixed_edge_count) {
        report.failure_reason = Some(FailureReason::FixedEdgeRule);
        return report;
    }
    match find_tree_pair(sg, case.tree_mode()) {
        Some(pair) => {
            report.admissible = true;
            report.tree_pair = Some(pair);
        }
        None => report.failure_reason = Some(FailureReason::NoPacking),
    }
    report
}

/// Validates the action first and reports an invalid one as a failure.
pub fn check_admissible_parts(
    graph: Graph,
    case: GroupCase,
    generator: Vec<usize>,
) -> AdmissibilityReport {
    match SymmetricGraph::new(graph, case, generator) {
        Ok(sg) => check_admissible(&sg),
        Err(e) => AdmissibilityReport {
            case,
            admissible: false,
            tree_pair: None,
            fixed_edge_count: 0,
            fixed_vertex_count: 0,
            failure_reason: Some(FailureReason::InvalidAction(e)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn edges(list: &[(usize, usize)]) -> BTreeSet<Edge> {
        list.iter().map(|&(a, b)| Edge::new(a, b)).collect()
    }

    fn w5(case: GroupCase) -> SymmetricGraph {
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
            ],
        )
        .unwrap();
        SymmetricGraph::new(g, case, vec![0, 3, 4, 1, 2]).unwrap()
    }

    #[test]
    fn wheel_reference_pair_validates() {
        let sg = w5(GroupCase::CsPreserving);
        let pair = TreePair {
            tree1: edges(&[(2, 3), (3, 0), (0, 1), (1, 4)]),
            tree2: edges(&[(1, 2), (2, 0), (0, 4), (4, 3)]),
            mode: TreeMode::Invariant,
        };
        pair.validate(&sg).unwrap();
        let found = find_tree_pair(&sg, TreeMode::Invariant).unwrap();
        found.validate(&sg).unwrap();
    }

    #[test]
    fn validator_rejects_broken_pairs() {
        let sg = w5(GroupCase::CsPreserving);
        let not_symmetric = TreePair {
            tree1: edges(&[(1, 2), (2, 3), (3, 4), (0, 1)]),
            tree2: edges(&[(4, 1), (0, 2), (0, 3), (0, 4)]),
            mode: TreeMode::Invariant,
        };
        assert!(matches!(
            not_symmetric.validate(&sg),
            Err(TreePairError::Symmetry(..))
        ));
        let cyclic = TreePair {
            tree1: edges(&[(1, 2), (2, 3), (3, 4), (4, 1)]),
            tree2: edges(&[(0, 1), (0, 2), (0, 3), (0, 4)]),
            mode: TreeMode::Invariant,
        };
        assert_eq!(cyclic.validate(&sg), Err(TreePairError::NotSpanningTree(1)));
    }

    #[test]
    fn edge_count_mismatch_has_no_pair() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let sg = SymmetricGraph::identity(g, GroupCase::C2);
        assert!(find_tree_pair(&sg, TreeMode::Invariant).is_none());
        assert_eq!(
            check_admissible(&sg).failure_reason,
            Some(FailureReason::EdgeCount)
        );
    }

    #[test]
    fn k4_double_transposition() {
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        // (0 2)(1 3) fixes edges 02 and 13
        let sg = SymmetricGraph::new(k4.clone(), GroupCase::C2, vec![2, 3, 0, 1]).unwrap();
        let report = check_admissible(&sg);
        assert!(report.admissible);
        assert_eq!(report.fixed_edge_count, 2);
        report.tree_pair.unwrap().validate(&sg).unwrap();
        // the same action under a reflection breaks the fixed-edge rule
        let cs = sg.with_case(GroupCase::CsPreserving).unwrap();
        assert_eq!(
            check_admissible(&cs).failure_reason,
            Some(FailureReason::FixedEdgeRule)
        );
    }

    #[test]
    fn swapped_mode_rejects_fixed_edges() {
        let k4 = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let sg = SymmetricGraph::new(k4, GroupCase::CsSwapping, vec![2, 3, 0, 1]).unwrap();
        assert!(find_tree_pair(&sg, TreeMode::Swapped).is_none());
    }

    #[test]
    fn all_pairs_are_valid_and_distinct() {
        let sg = w5(GroupCase::CsPreserving);
        let pairs = all_tree_pairs(&sg, TreeMode::Invariant);
        assert!(!pairs.is_empty());
        for p in &pairs {
            p.validate(&sg).unwrap();
        }
        let distinct: BTreeSet<_> = pairs.iter().map(|p| p.tree1.clone()).collect();
        assert_eq!(distinct.len(), pairs.len());
    }

    #[test]
    fn invalid_action_is_reported() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let r = check_admissible_parts(g, GroupCase::C2, vec![1, 0, 2]);
        assert!(matches!(
            r.failure_reason,
            Some(FailureReason::InvalidAction(SymError::NotAutomorphism(_)))
        ));
    }
}
