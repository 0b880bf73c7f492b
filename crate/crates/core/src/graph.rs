//! Finite simple graphs with a cyclic group action by automorphisms.
//!
//! Vertices are dense ids `0..n`. A [`SymmetricGraph`] stores the permutation
//! of the group generator only; powers are computed on demand.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::treepack::TreeMode;

/// An undirected edge, stored with its smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(usize, usize);

impl Edge {
    /// Builds the edge `ab`. The endpoints may be given in either order.
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(self) -> usize {
        self.0
    }

    pub fn v(self) -> usize {
        self.1
    }

    pub fn ends(self) -> (usize, usize) {
        (self.0, self.1)
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(self, x: usize) -> usize {
        if self.0 == x {
            self.1
        } else {
            debug_assert_eq!(self.1, x);
            self.0
        }
    }

    pub fn map(self, f: impl Fn(usize) -> usize) -> Edge {
        Edge::new(f(self.0), f(self.1))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("generator is not a bijection on the vertex set")]
    NotBijection,
    #[error("generator is not an automorphism: image of edge {0} is missing")]
    NotAutomorphism(Edge),
    #[error("generator raised to the group order {order} is not the identity")]
    WrongOrder { order: usize },
    #[error("operation requires a Z2 action")]
    NotInvolution,
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    WrongDegree {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    #[error("N(v) and N(sv) meet in {size} vertices at v = {vertex} but not in the fixed vertex")]
    LemmaViolation { vertex: usize, size: usize },
}

/// A finite simple graph on the vertex set `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<Edge>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph, rejecting loops, duplicate edges and unknown endpoints.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, SymError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn vertices(&self) -> core::ops::Range<usize> {
        0..self.n
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.contains(&Edge::new(a, b))
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), SymError> {
        if a == b {
            return Err(SymError::InvalidGraph(alloc::format!("loop at vertex {a}")));
        }
        if a >= self.n || b >= self.n {
            return Err(SymError::InvalidGraph(alloc::format!(
                "edge {a}-{b} has an endpoint outside 0..{}",
                self.n
            )));
        }
        if !self.edges.insert(Edge::new(a, b)) {
            return Err(SymError::InvalidGraph(alloc::format!(
                "duplicate edge {a}-{b}"
            )));
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, e: Edge) -> bool {
        self.edges.remove(&e)
    }

    /// Appends `k` isolated vertices and returns the id of the first.
    pub fn add_vertices(&mut self, k: usize) -> usize {
        let first = self.n;
        self.n += k;
        first
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|e| e.contains(v))
            .map(|e| e.other(v))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = alloc::vec![0; self.n];
        for e in &self.edges {
            deg[e.u()] += 1;
            deg[e.v()] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = alloc::vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = alloc::vec![false; self.n];
        let mut stack = alloc::vec![0];
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
        count == self.n
    }

    /// Subgraph induced by `vertices`, keeping the original vertex ids.
    pub fn induced(&self, vertices: &BTreeSet<usize>) -> InducedSubgraph {
        let edges = self
            .edges
            .iter()
            .filter(|e| vertices.contains(&e.u()) && vertices.contains(&e.v()))
            .copied()
            .collect();
        InducedSubgraph {
            vertices: vertices.clone(),
            edges,
        }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        Graph {
            n: self.n,
            edges: self.edges.iter().map(|e| e.map(|x| perm[x])).collect(),
        }
    }
}

/// A subgraph that keeps the vertex ids of its host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<Edge>,
}

/// The four symmetry settings of the characterisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupCase {
    /// Reflection preserving the facet pairs of the unit ball.
    CsPreserving,
    /// Reflection swapping the two facet pairs.
    CsSwapping,
    /// Half-turn rotation.
    C2,
    /// Quarter-turn rotation.
    C4,
}

impl GroupCase {
    pub const ALL: [GroupCase; 4] = [
        GroupCase::CsPreserving,
        GroupCase::CsSwapping,
        GroupCase::C2,
        GroupCase::C4,
    ];

    pub fn order(self) -> usize {
        match self {
            GroupCase::C4 => 4,
            _ => 2,
        }
    }

    pub fn tree_mode(self) -> TreeMode {
        match self {
            GroupCase::CsPreserving | GroupCase::C2 => TreeMode::Invariant,
            GroupCase::CsSwapping | GroupCase::C4 => TreeMode::Swapped,
        }
    }

    /// Power of the generator whose fixed edges are counted by the
    /// admissibility rule.
    pub fn fixed_edge_power(self) -> usize {
        match self {
            GroupCase::C4 => 2,
            _ => 1,
        }
    }

    /// Whether `count` fixed edges are permitted.
    pub fn allows_fixed_edges(self, count: usize) -> bool {
        match self {
            GroupCase::CsPreserving | GroupCase::CsSwapping => count == 0,
            GroupCase::C2 | GroupCase::C4 => count == 0 || count == 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupCase::CsPreserving => "CsPreserving",
            GroupCase::CsSwapping => "CsSwapping",
            GroupCase::C2 => "C2",
            GroupCase::C4 => "C4",
        }
    }
}

impl fmt::Display for GroupCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cspreserving" | "cs-preserving" | "a" => Ok(GroupCase::CsPreserving),
            "csswapping" | "cs-swapping" | "b" => Ok(GroupCase::CsSwapping),
            "c2" | "c" => Ok(GroupCase::C2),
            "c4" | "d" => Ok(GroupCase::C4),
            _ => Err(alloc::format!("unknown group case `{s}`")),
        }
    }
}

/// Vertex and edge orbits of the cyclic action.
///
/// Each orbit is listed as `m, γm, γ²m, …` starting from its smallest member;
/// orbits are sorted by that member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    pub vertex_orbits: Vec<Vec<usize>>,
    pub edge_orbits: Vec<Vec<Edge>>,
}

/// A graph together with a validated action of ℤ₂ or ℤ₄.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricGraph {
    graph: Graph,
    case: GroupCase,
    generator: Vec<usize>,
}

impl SymmetricGraph {
    /// Validates `generator` as an automorphism of `graph` whose order divides
    /// the group order of `case`.
    pub fn new(graph: Graph, case: GroupCase, generator: Vec<usize>) -> Result<Self, SymError> {
        let n = graph.order();
        if generator.len() != n {
            return Err(SymError::NotBijection);
        }
        let mut hit = alloc::vec![false; n];
        for &x in &generator {
            if x >= n || hit[x] {
                return Err(SymError::NotBijection);
            }
            hit[x] = true;
        }
        let order = case.order();
        for v in 0..n {
            let mut w = v;
            for _ in 0..order {
                w = generator[w];
            }
            if w != v {
                return Err(SymError::WrongOrder { order });
            }
        }
        for e in graph.edges() {
            let img = e.map(|x| generator[x]);
            if !graph.contains(img) {
                return Err(SymError::NotAutomorphism(*e));
            }
        }
        Ok(SymmetricGraph {
            graph,
            case,
            generator,
        })
    }

    /// The trivial action.
    pub fn identity(graph: Graph, case: GroupCase) -> Self {
        let generator = (0..graph.order()).collect();
        SymmetricGraph {
            graph,
            case,
            generator,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn case(&self) -> GroupCase {
        self.case
    }

    pub fn generator(&self) -> &[usize] {
        &self.generator
    }

    pub fn group_order(&self) -> usize {
        self.case.order()
    }

    /// The same action read under another case of the same group order.
    pub fn with_case(&self, case: GroupCase) -> Result<Self, SymError> {
        SymmetricGraph::new(self.graph.clone(), case, self.generator.clone())
    }

    /// `γ^power v`.
    pub fn image(&self, v: usize, power: usize) -> usize {
        let mut w = v;
        for _ in 0..power % self.group_order() {
            w = self.generator[w];
        }
        w
    }

    pub fn image_edge(&self, e: Edge, power: usize) -> Edge {
        e.map(|x| self.image(x, power))
    }

    /// The involution `s`; only meaningful for ℤ₂ actions.
    pub fn s(&self, v: usize) -> usize {
        self.generator[v]
    }

    pub fn fixed_vertices(&self, power: usize) -> BTreeSet<usize> {
        self.graph
            .vertices()
            .filter(|&v| self.image(v, power) == v)
            .collect()
    }

    pub fn fixed_edges(&self, power: usize) -> BTreeSet<Edge> {
        self.graph
            .edges()
            .iter()
            .filter(|&&e| self.image_edge(e, power) == e)
            .copied()
            .collect()
    }

    /// Vertices and edges fixed by `γ^power`.
    pub fn fixed_elements(&self, power: usize) -> (BTreeSet<usize>, BTreeSet<Edge>) {
        (self.fixed_vertices(power), self.fixed_edges(power))
    }

    pub fn vertex_orbit(&self, v: usize) -> Vec<usize> {
        let mut orbit = alloc::vec![v];
        let mut w = self.generator[v];
        while w != v {
            orbit.push(w);
            w = self.generator[w];
        }
        orbit
    }

    pub fn edge_orbit(&self, e: Edge) -> Vec<Edge> {
        let mut orbit = alloc::vec![e];
        let mut f = self.image_edge(e, 1);
        while f != e {
            orbit.push(f);
            f = self.image_edge(f, 1);
        }
        orbit
    }

    pub fn orbits(&self) -> OrbitPartition {
        let mut seen = BTreeSet::new();
        let mut vertex_orbits = Vec::new();
        for v in self.graph.vertices() {
            if seen.insert(v) {
                let orbit = self.vertex_orbit(v);
                seen.extend(orbit.iter().copied());
                vertex_orbits.push(orbit);
            }
        }
        let mut seen = BTreeSet::new();
        let mut edge_orbits = Vec::new();
        for &e in self.graph.edges() {
            if seen.insert(e) {
                let orbit = self.edge_orbit(e);
                seen.extend(orbit.iter().copied());
                edge_orbits.push(orbit);
            }
        }
        OrbitPartition {
            vertex_orbits,
            edge_orbits,
        }
    }

    /// The subgraph induced by `N(v) ∪ N(sv) ∪ {v, sv}`.
    pub fn symmetric_neighborhood(&self, v: usize) -> Result<InducedSubgraph, SymError> {
        if self.group_order() != 2 {
            return Err(SymError::NotInvolution);
        }
        let sv = self.s(v);
        let mut set: BTreeSet<usize> = self.graph.neighbors(v).into_iter().collect();
        set.extend(self.graph.neighbors(sv));
        set.insert(v);
        set.insert(sv);
        Ok(self.graph.induced(&set))
    }

    /// `|N(v) ∩ N(sv)|` for a 3-valent vertex `v`.
    ///
    /// When the intersection has one or three members it must contain a fixed
    /// vertex; otherwise the pair is not admissible and
    /// [`SymError::LemmaViolation`] is returned.
    pub fn neighborhood_intersection(&self, v: usize) -> Result<usize, SymError> {
        if self.group_order() != 2 {
            return Err(SymError::NotInvolution);
        }
        let degree = self.graph.degree(v);
        if degree != 3 {
            return Err(SymError::WrongDegree {
                vertex: v,
                degree,
                expected: 3,
            });
        }
        let nv: BTreeSet<usize> = self.graph.neighbors(v).into_iter().collect();
        let nsv: BTreeSet<usize> = self.graph.neighbors(self.s(v)).into_iter().collect();
        let common: Vec<usize> = nv.intersection(&nsv).copied().collect();
        let size = common.len();
        if (size == 1 || size == 3) && !common.iter().any(|&w| self.s(w) == w) {
            return Err(SymError::LemmaViolation { vertex: v, size });
        }
        Ok(size)
    }

    /// Conjugates the action by the relabelling `v ↦ perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> SymmetricGraph {
        let n = self.graph.order();
        let mut generator = alloc::vec![0; n];
        for v in 0..n {
            generator[perm[v]] = perm[self.generator[v]];
        }
        SymmetricGraph {
            graph: self.graph.relabel(perm),
            case: self.case,
            generator,
        }
    }

    pub(crate) fn from_parts_unchecked(
        graph: Graph,
        case: GroupCase,
        generator: Vec<usize>,
    ) -> Self {
        debug_assert!(SymmetricGraph::new(graph.clone(), case, generator.clone()).is_ok());
        SymmetricGraph {
            graph,
            case,
            generator,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn w5() -> SymmetricGraph {
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
        SymmetricGraph::new(g, GroupCase::C2, vec![0, 3, 4, 1, 2]).unwrap()
    }

    #[test]
    fn wheel_action_is_valid() {
        let sg = w5();
        let (fv, fe) = sg.fixed_elements(1);
        assert_eq!(fv.into_iter().collect::<Vec<_>>(), vec![0]);
        assert!(fe.is_empty());
    }

    #[test]
    fn identity_is_always_valid() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let sg = SymmetricGraph::new(g.clone(), GroupCase::C2, vec![0, 1, 2]).unwrap();
        assert_eq!(sg.fixed_edges(1).len(), 2);
        let k2 = Graph::new(2, [(0, 1)]).unwrap();
        let sg = SymmetricGraph::new(k2, GroupCase::C2, vec![0, 1]).unwrap();
        let (fv, fe) = sg.fixed_elements(1);
        assert_eq!(fv.len(), 2);
        assert_eq!(fe.len(), 1);
    }

    #[test]
    fn three_cycle_has_wrong_order() {
        let k3 = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let err = SymmetricGraph::new(k3, GroupCase::C2, vec![1, 2, 0]).unwrap_err();
        assert_eq!(err, SymError::WrongOrder { order: 2 });
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            Graph::new(2, [(0, 0)]),
            Err(SymError::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(2, [(0, 1), (1, 0)]),
            Err(SymError::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::new(2, [(0, 2)]),
            Err(SymError::InvalidGraph(_))
        ));
        let p3 = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            SymmetricGraph::new(p3.clone(), GroupCase::C2, vec![1, 0, 2]).unwrap_err(),
            SymError::NotAutomorphism(Edge::new(1, 2))
        );
        assert_eq!(
            SymmetricGraph::new(p3, GroupCase::C2, vec![0, 0, 2]).unwrap_err(),
            SymError::NotBijection
        );
    }

    #[test]
    fn wheel_neighborhood_is_everything() {
        let sg = w5();
        let nb = sg.symmetric_neighborhood(1).unwrap();
        assert_eq!(nb.vertices.len(), 5);
        assert_eq!(nb.edges.len(), 8);
        assert_eq!(nb, sg.symmetric_neighborhood(3).unwrap());
        // N(v1) = {v0, v2, v4}, N(v3) = {v0, v2, v4}
        assert_eq!(sg.neighborhood_intersection(1).unwrap(), 3);
    }

    #[test]
    fn fixed_vertex_neighborhood() {
        // v = 0 fixed with the single neighbour 1.
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let sg = SymmetricGraph::identity(g, GroupCase::C2);
        let nb = sg.symmetric_neighborhood(0).unwrap();
        assert_eq!(nb.vertices.iter().copied().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(nb.edges.len(), 1);
    }

    #[test]
    fn wheel_edge_orbits() {
        let orbits = w5().orbits();
        assert_eq!(orbits.edge_orbits.len(), 4);
        assert!(orbits.edge_orbits.iter().all(|o| o.len() == 2));
        assert_eq!(orbits.vertex_orbits, vec![vec![0], vec![1, 3], vec![2, 4]]);
    }

    #[test]
    fn intersection_sizes() {
        // s = (0 1)(2 7), 3 fixed: N(0) ∩ N(1) = {2, 3, 7} contains the fixed 3.
        let g = Graph::new(8, [(0, 2), (0, 7), (0, 3), (1, 7), (1, 2), (1, 3)]).unwrap();
        let sg = SymmetricGraph::new(g, GroupCase::C2, vec![1, 0, 7, 3, 4, 5, 6, 2]).unwrap();
        assert_eq!(sg.neighborhood_intersection(0).unwrap(), 3);

        // s = (0 1)(2 7)(3 4), 5 fixed: N(0) ∩ N(1) = {2, 7}.
        let g = Graph::new(
            8,
            [
                (0, 2),
                (0, 7),
                (0, 3),
                (1, 7),
                (1, 2),
                (1, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap();
        let sg = SymmetricGraph::new(g, GroupCase::C2, vec![1, 0, 7, 4, 3, 5, 6, 2]).unwrap();
        assert_eq!(sg.neighborhood_intersection(0).unwrap(), 2);
        assert!(matches!(
            sg.neighborhood_intersection(5),
            Err(SymError::WrongDegree { .. })
        ));
    }

    #[test]
    fn relabel_conjugates_action() {
        let sg = w5();
        let perm = [4, 0, 1, 2, 3];
        let r = sg.relabel(&perm);
        assert!(SymmetricGraph::new(r.graph().clone(), r.case(), r.generator().to_vec()).is_ok());
        assert_eq!(r.fixed_vertices(1).len(), 1);
        assert!(r.fixed_vertices(1).contains(&4));
    }
}
