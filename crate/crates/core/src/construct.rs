//! Allowable extensions for ℤ₂-symmetric graphs, their inverses, and
//! construction chains from the wheel `W₅`.
//!
//! Vertex ids. A move is stored against the smaller graph `H`. The ids of the
//! vertices it creates are positions in the extended graph `G` (`new_ids`);
//! the vertices of `H` fill the remaining positions of `G` in increasing
//! order. This makes replay exact: reducing `G` and re-applying the move
//! gives back `G` with the same labels.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::graph::{Edge, Graph, GroupCase, SymError, SymmetricGraph};
use crate::treepack::{find_tree_pair, TreeMode, TreePair};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("graph is not admissible for a construction chain: {0}")]
    NotAdmissible(String),
    #[error("no reduction found for a graph on {0} vertices")]
    NotReducible(usize),
    #[error("internal contract violation: {0}")]
    Internal(String),
    #[error(transparent)]
    Sym(#[from] SymError),
}

fn violated(msg: impl Into<String>) -> ConstructError {
    ConstructError::PreconditionViolated(msg.into())
}

/// The four allowable extensions, with vertex ids of the smaller graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    /// New pair `v, sv` with `v` joined to `v1, v2`.
    ZeroExt { v1: usize, v2: usize },
    /// Removes `e = v1v2` and `se`; `v` is joined to `v1, v2, v3`.
    OneExt {
        v1: usize,
        v2: usize,
        v3: usize,
        removed: Edge,
    },
    /// Removes `e = v1(sv2)` and `se`; `v` is joined to `v1, v2, v3`.
    ModifiedOneExt {
        v1: usize,
        v2: usize,
        v3: usize,
        removed: Edge,
    },
    /// Replaces the fixed vertex `v0` by a wheel. `attach` lists
    /// `(w, π(w))` for every neighbour `w` of `v0`, where `π(w)` indexes the
    /// wheel: 0 is `v0`, 1..=4 are the rim vertices `r1, r2, r3 = s r1,
    /// r4 = s r2` in cyclic order.
    FixedVertexToW5 {
        v0: usize,
        attach: Vec<(usize, usize)>,
    },
}

impl MoveKind {
    pub fn name(&self) -> &'static str {
        match self {
            MoveKind::ZeroExt { .. } => "0-extension",
            MoveKind::OneExt { .. } => "1-extension",
            MoveKind::ModifiedOneExt { .. } => "modified 1-extension",
            MoveKind::FixedVertexToW5 { .. } => "fixed-vertex-to-W5",
        }
    }

    fn new_vertex_count(&self) -> usize {
        match self {
            MoveKind::FixedVertexToW5 { .. } => 4,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionMove {
    pub kind: MoveKind,
    /// Ids in the extended graph of `[v, sv]`, or of `[r1, r2, r3, r4]`.
    pub new_ids: Vec<usize>,
}

impl ExtensionMove {
    /// A move whose new vertices are appended after those of `H`.
    pub fn appended(kind: MoveKind, h_order: usize) -> Self {
        let k = kind.new_vertex_count();
        ExtensionMove {
            kind,
            new_ids: (h_order..h_order + k).collect(),
        }
    }
}

impl fmt::Display for ExtensionMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MoveKind::ZeroExt { v1, v2 } => write!(f, "0-extension on {v1}, {v2}")?,
            MoveKind::OneExt {
                v1,
                v2,
                v3,
                removed,
            } => write!(f, "1-extension on {v1}, {v2}, {v3} removing {removed}")?,
            MoveKind::ModifiedOneExt {
                v1,
                v2,
                v3,
                removed,
            } => write!(
                f,
                "modified 1-extension on {v1}, {v2}, {v3} removing {removed}"
            )?,
            MoveKind::FixedVertexToW5 { v0, .. } => write!(f, "fixed-vertex-to-W5 at {v0}")?,
        }
        write!(f, " (new vertices {:?})", self.new_ids)
    }
}

// Position in G of every vertex of H, given the ids of the new vertices.
fn h_to_g(h_order: usize, new_ids: &[usize]) -> Result<Vec<usize>, ConstructError> {
    let n = h_order + new_ids.len();
    let mut taken = alloc::vec![false; n];
    for &x in new_ids {
        if x >= n || taken[x] {
            return Err(violated("new vertex ids must be distinct positions"));
        }
        taken[x] = true;
    }
    Ok((0..n).filter(|&x| !taken[x]).collect())
}

/// Applies `mv` to `h`, checking every clause of the extension's definition.
pub fn apply_move(
    h: &SymmetricGraph,
    mv: &ExtensionMove,
) -> Result<SymmetricGraph, ConstructError> {
    if h.group_order() != 2 {
        return Err(violated("extensions need a Z2 action"));
    }
    let hn = h.graph().order();
    if mv.new_ids.len() != mv.kind.new_vertex_count() {
        return Err(violated("wrong number of new vertex ids"));
    }
    let m = h_to_g(hn, &mv.new_ids)?;
    let n = hn + mv.new_ids.len();
    let s = |x: usize| h.s(x);
    let in_range = |xs: &[usize]| xs.iter().all(|&x| x < hn);

    let mut generator = alloc::vec![0; n];
    for x in 0..hn {
        generator[m[x]] = m[s(x)];
    }
    let mut removed: BTreeSet<Edge> = BTreeSet::new();
    let mut added: Vec<(usize, usize)> = Vec::new();

    match &mv.kind {
        MoveKind::ZeroExt { v1, v2 } => {
            let (v1, v2) = (*v1, *v2);
            if !in_range(&[v1, v2]) || v1 == v2 {
                return Err(violated("0-extension needs two distinct vertices of H"));
            }
            let (v, sv) = (mv.new_ids[0], mv.new_ids[1]);
            generator[v] = sv;
            generator[sv] = v;
            for x in [v1, v2] {
                added.push((v, m[x]));
                added.push((sv, m[s(x)]));
            }
        }
        MoveKind::OneExt {
            v1,
            v2,
            v3,
            removed: e,
        }
        | MoveKind::ModifiedOneExt {
            v1,
            v2,
            v3,
            removed: e,
        } => {
            let (v1, v2, v3) = (*v1, *v2, *v3);
            if !in_range(&[v1, v2, v3]) || v1 == v2 || v1 == v3 || v2 == v3 {
                return Err(violated("1-extension needs three distinct vertices of H"));
            }
            let modified = matches!(mv.kind, MoveKind::ModifiedOneExt { .. });
            let expected = if modified {
                let distinct: BTreeSet<usize> = [v1, v2, s(v1), s(v2)].into_iter().collect();
                if distinct.len() != 4 {
                    return Err(violated("v1, v2, sv1, sv2 must be distinct"));
                }
                Edge::new(v1, s(v2))
            } else {
                Edge::new(v1, v2)
            };
            if *e != expected {
                return Err(violated(alloc::format!(
                    "removed edge {e} is not {expected}"
                )));
            }
            if !h.graph().contains(*e) {
                return Err(violated(alloc::format!("removed edge {e} is not in H")));
            }
            let se = h.image_edge(*e, 1);
            if se == *e {
                return Err(violated("removed edge is fixed by s"));
            }
            removed.insert(*e);
            removed.insert(se);
            let (v, sv) = (mv.new_ids[0], mv.new_ids[1]);
            generator[v] = sv;
            generator[sv] = v;
            for x in [v1, v2, v3] {
                added.push((v, m[x]));
                added.push((sv, m[s(x)]));
            }
        }
        MoveKind::FixedVertexToW5 { v0, attach } => {
            let v0 = *v0;
            if v0 >= hn || s(v0) != v0 {
                return Err(violated("W5 extension needs a fixed vertex of H"));
            }
            let nbrs: BTreeSet<usize> = h.graph().neighbors(v0).into_iter().collect();
            let pi: BTreeMap<usize, usize> = attach.iter().copied().collect();
            if pi.len() != attach.len() || pi.keys().copied().collect::<BTreeSet<_>>() != nbrs {
                return Err(violated("attachment map must cover N(v0) exactly once"));
            }
            let local_s = |i: usize| match i {
                0 => 0,
                1 => 3,
                2 => 4,
                3 => 1,
                _ => 2,
            };
            for (&w, &target) in &pi {
                if target > 4 {
                    return Err(violated("attachment index out of range"));
                }
                if pi[&s(w)] != local_s(target) {
                    return Err(violated("attachment map does not commute with s"));
                }
            }
            let r = &mv.new_ids;
            let wheel = [m[v0], r[0], r[1], r[2], r[3]];
            generator[r[0]] = r[2];
            generator[r[2]] = r[0];
            generator[r[1]] = r[3];
            generator[r[3]] = r[1];
            for &w in &nbrs {
                removed.insert(Edge::new(v0, w));
                added.push((m[w], wheel[pi[&w]]));
            }
            for i in 0..4 {
                added.push((wheel[0], r[i]));
                added.push((r[i], r[(i + 1) % 4]));
            }
        }
    }

    let mut g = Graph::empty(n);
    for e in h.graph().edges() {
        if !removed.contains(e) {
            g.add_edge(m[e.u()], m[e.v()])?;
        }
    }
    for (a, b) in added {
        g.add_edge(a, b)
            .map_err(|err| violated(alloc::format!("extension is not simple: {err}")))?;
    }
    Ok(SymmetricGraph::new(g, h.case(), generator)?)
}

/// `W₅` with hub 0 and rim cycle 1-2-3-4, acted on by `θ*` (1↔3, 2↔4).
pub fn w5_graph(case: GroupCase) -> SymmetricGraph {
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
    .expect("wheel is simple");
    SymmetricGraph::from_parts_unchecked(g, case, alloc::vec![0, 3, 4, 1, 2])
}

/// The base graph with its reference tree pair, read as a facet-preserving
/// reflection.
pub fn w5_base() -> (SymmetricGraph, TreePair) {
    let edges = |l: &[(usize, usize)]| l.iter().map(|&(a, b)| Edge::new(a, b)).collect();
    (
        w5_graph(GroupCase::CsPreserving),
        TreePair {
            tree1: edges(&[(2, 3), (3, 0), (0, 1), (1, 4)]),
            tree2: edges(&[(1, 2), (2, 0), (0, 4), (4, 3)]),
            mode: TreeMode::Invariant,
        },
    )
}

/// Which branch of the case analysis produced a reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionCase {
    Degree2,
    /// `|N(v) ∩ N(sv)| = 2`; `apart` when `v1v2` is not an edge.
    Meet2 {
        apart: bool,
    },
    /// Disjoint neighbourhoods.
    Meet0 {
        apart: bool,
    },
    /// One common neighbour, the fixed vertex, with `v1v2` absent or `v3 = v0`.
    Meet1 {
        apart: bool,
    },
    /// One common neighbour and `v1v2 ∈ E`, `v3 ≠ v0`: the component of
    /// `G₁ − {v, sv}` holding `v3` decides the move. `shifted` records that
    /// the first choice of edge was present and the alternative was used.
    Meet1Path {
        end: PathEnd,
        shifted: bool,
    },
    /// Three common neighbours.
    Meet3 {
        contracted: bool,
    },
    /// None of the above applied; any reduction certified by a search.
    Search,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathEnd {
    Fixed,
    Near,
    Far,
}

impl fmt::Display for ReductionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let adj = |apart: bool| if apart { "v1v2 absent" } else { "v1v2 present" };
        match self {
            ReductionCase::Degree2 => f.write_str("degree-2 vertex"),
            ReductionCase::Meet2 { apart } => {
                write!(f, "neighbourhoods meet in 2, {}", adj(*apart))
            }
            ReductionCase::Meet0 { apart } => write!(f, "neighbourhoods disjoint, {}", adj(*apart)),
            ReductionCase::Meet1 { apart } => {
                write!(f, "neighbourhoods meet in 1, {}", adj(*apart))
            }
            ReductionCase::Meet1Path { end, shifted } => {
                let end = match end {
                    PathEnd::Fixed => "fixed vertex",
                    PathEnd::Near => "vj",
                    PathEnd::Far => "s(vj)",
                };
                write!(f, "neighbourhoods meet in 1, v3 joined to {end}")?;
                if *shifted {
                    f.write_str(", alternative edge")?;
                }
                Ok(())
            }
            ReductionCase::Meet3 { contracted: true } => {
                f.write_str("neighbourhoods meet in 3, wheel contracted")
            }
            ReductionCase::Meet3 { contracted: false } => {
                f.write_str("neighbourhoods meet in 3, v0v1 absent")
            }
            ReductionCase::Search => f.write_str("searched reduction"),
        }
    }
}

/// One inverse extension.
#[derive(Clone, Debug)]
pub struct ReductionStep {
    /// The smaller graph `H`.
    pub graph: SymmetricGraph,
    /// The move with `apply_move(graph, mv) = G`.
    pub mv: ExtensionMove,
    /// Invariant tree pair of `H`.
    pub pair: TreePair,
    pub case: ReductionCase,
    /// Whether `pair` came from the tree surgery of the case analysis rather
    /// than from a fresh search.
    pub surgery: bool,
}

// A candidate reduction in the ids of G.
#[derive(Clone, Debug)]
enum Shape {
    Zero {
        v: usize,
        v1: usize,
        v2: usize,
    },
    One {
        v: usize,
        v1: usize,
        v2: usize,
        v3: usize,
    },
    Modified {
        v: usize,
        v1: usize,
        v2: usize,
        v3: usize,
    },
    Wheel {
        v0: usize,
        rim: [usize; 4],
    },
}

#[derive(Clone, Debug)]
struct Recipe {
    shape: Shape,
    // tree (1 or 2) that receives the added edge pair
    tree_a: u8,
    // edge g of G whose pair {g, sg} moves from the other tree into tree_a,
    // while the added pair goes to the other tree
    recolour: Option<Edge>,
    case: ReductionCase,
}

struct Reducer<'a> {
    sg: &'a SymmetricGraph,
    pair: &'a TreePair,
}

impl Reducer<'_> {
    fn s(&self, x: usize) -> usize {
        self.sg.s(x)
    }

    fn has(&self, a: usize, b: usize) -> bool {
        self.sg.graph().has_edge(a, b)
    }

    fn tree(&self, a: usize, b: usize) -> u8 {
        self.pair.tree_of(Edge::new(a, b)).unwrap_or(0)
    }

    // The added pair {e, se} in G ids, if the shape adds one.
    fn added(&self, shape: &Shape) -> Option<Edge> {
        match *shape {
            Shape::One { v1, v2, .. } => Some(Edge::new(v1, v2)),
            Shape::Modified { v1, v2, .. } => Some(Edge::new(v1, self.s(v2))),
            _ => None,
        }
    }

    fn degree2(&self, v: usize) -> Option<Recipe> {
        let nb = self.sg.graph().neighbors(v);
        Some(Recipe {
            shape: Shape::Zero {
                v,
                v1: nb[0],
                v2: nb[1],
            },
            tree_a: 1,
            recolour: None,
            case: ReductionCase::Degree2,
        })
    }

    // The tree holding two of the three edges at v, and those two neighbours
    // in increasing order followed by the third.
    fn split(&self, v: usize) -> Option<(u8, [usize; 3])> {
        let nb = self.sg.graph().neighbors(v);
        for t in [1u8, 2] {
            let same: Vec<usize> = nb
                .iter()
                .copied()
                .filter(|&x| self.tree(v, x) == t)
                .collect();
            if same.len() == 2 {
                let other = *nb.iter().find(|x| !same.contains(x))?;
                return Some((t, [same[0], same[1], other]));
            }
        }
        None
    }

    fn meet2(&self, v: usize) -> Option<Recipe> {
        let nb = self.sg.graph().neighbors(v);
        let x = *nb
            .iter()
            .find(|&&x| self.s(x) != x && nb.contains(&self.s(x)))?;
        let v2 = *nb.iter().find(|&&y| y != x && y != self.s(x))?;
        let a = self.tree(v, v2);
        // relabel so that vv1 and vv2 share a tree
        let v1 = if self.tree(v, x) == a { x } else { self.s(x) };
        let sv1 = self.s(v1);
        if !self.has(v1, v2) {
            return Some(Recipe {
                shape: Shape::One { v, v1, v2, v3: sv1 },
                tree_a: a,
                recolour: None,
                case: ReductionCase::Meet2 { apart: true },
            });
        }
        let e = (v1, self.s(v2));
        if self.has(e.0, e.1) {
            return None;
        }
        Some(Recipe {
            shape: Shape::One {
                v,
                v1: sv1,
                v2,
                v3: v1,
            },
            tree_a: a,
            recolour: None,
            case: ReductionCase::Meet2 { apart: false },
        })
    }

    fn meet0(&self, v: usize) -> Option<Recipe> {
        let (a, [v1, v2, v3]) = self.split(v)?;
        if !self.has(v1, v2) {
            return Some(Recipe {
                shape: Shape::One { v, v1, v2, v3 },
                tree_a: a,
                recolour: None,
                case: ReductionCase::Meet0 { apart: true },
            });
        }
        if self.has(v1, self.s(v2)) {
            return None;
        }
        Some(Recipe {
            shape: Shape::Modified { v, v1, v2, v3 },
            tree_a: a,
            recolour: None,
            case: ReductionCase::Meet0 { apart: false },
        })
    }

    fn meet1(&self, v: usize) -> Option<Recipe> {
        let (a, [v1, v2, v3]) = self.split(v)?;
        let nb = self.sg.graph().neighbors(v);
        let v0 = *nb.iter().find(|&&x| self.s(x) == x)?;
        if !self.has(v1, v2) {
            return Some(Recipe {
                shape: Shape::One { v, v1, v2, v3 },
                tree_a: a,
                recolour: None,
                case: ReductionCase::Meet1 { apart: true },
            });
        }
        if v3 == v0 {
            if self.has(v1, self.s(v2)) {
                return None;
            }
            return Some(Recipe {
                shape: Shape::Modified { v, v1, v2, v3 },
                tree_a: a,
                recolour: None,
                case: ReductionCase::Meet1 { apart: false },
            });
        }
        let vj = if v1 == v0 { v2 } else { v1 };
        let svj = self.s(vj);
        // components of tree a after deleting v and sv
        let sv = self.s(v);
        let n = self.sg.graph().order();
        let mut uf = UnionFind::new(n);
        for e in self.pair.tree(a) {
            if !e.contains(v) && !e.contains(sv) {
                uf.union(e.u(), e.v());
            }
        }
        let end = if uf.same(v3, v0) {
            PathEnd::Fixed
        } else if uf.same(v3, vj) {
            PathEnd::Near
        } else if uf.same(v3, svj) {
            PathEnd::Far
        } else {
            return None;
        };
        let g = Edge::new(v0, vj);
        let recipe = |shape, recolour, shifted| Recipe {
            shape,
            tree_a: a,
            recolour,
            case: ReductionCase::Meet1Path { end, shifted },
        };
        match end {
            PathEnd::Fixed => {
                if !self.has(vj, v3) {
                    Some(recipe(
                        Shape::One {
                            v,
                            v1: vj,
                            v2: v3,
                            v3: v0,
                        },
                        None,
                        false,
                    ))
                } else if !self.has(svj, v3) {
                    Some(recipe(
                        Shape::Modified {
                            v,
                            v1: v3,
                            v2: vj,
                            v3: v0,
                        },
                        None,
                        true,
                    ))
                } else {
                    None
                }
            }
            PathEnd::Near | PathEnd::Far => {
                if !self.has(v0, v3) {
                    Some(recipe(
                        Shape::One {
                            v,
                            v1: v0,
                            v2: v3,
                            v3: vj,
                        },
                        None,
                        false,
                    ))
                } else if end == PathEnd::Near && !self.has(svj, v3) {
                    Some(recipe(
                        Shape::Modified {
                            v,
                            v1: v3,
                            v2: vj,
                            v3: v0,
                        },
                        Some(g),
                        true,
                    ))
                } else if end == PathEnd::Far && !self.has(vj, v3) {
                    Some(recipe(
                        Shape::One {
                            v,
                            v1: vj,
                            v2: v3,
                            v3: v0,
                        },
                        Some(g),
                        true,
                    ))
                } else {
                    None
                }
            }
        }
    }

    fn meet3(&self, v: usize) -> Option<Recipe> {
        let nb = self.sg.graph().neighbors(v);
        let v0 = *nb.iter().find(|&&x| self.s(x) == x)?;
        let x = *nb.iter().find(|&&x| x != v0)?;
        let a = self.tree(v, v0);
        let v1 = if self.tree(v, x) == a { x } else { self.s(x) };
        let sv1 = self.s(v1);
        if !self.has(v0, v1) {
            return Some(Recipe {
                shape: Shape::One {
                    v,
                    v1: v0,
                    v2: v1,
                    v3: sv1,
                },
                tree_a: a,
                recolour: None,
                case: ReductionCase::Meet3 { contracted: false },
            });
        }
        let sv = self.s(v);
        let wheel: BTreeSet<usize> = [v0, v, v1, sv, sv1].into_iter().collect();
        let g = self.sg.graph();
        for u in g.vertices().filter(|u| !wheel.contains(u)) {
            let hits = g.neighbors(u).iter().filter(|w| wheel.contains(w)).count();
            if hits >= 2 {
                return None;
            }
        }
        Some(Recipe {
            shape: Shape::Wheel {
                v0,
                rim: [v, v1, sv, sv1],
            },
            tree_a: a,
            recolour: None,
            case: ReductionCase::Meet3 { contracted: true },
        })
    }

    // Builds H, the move and the surgically transformed pair.
    fn realise(&self, recipe: &Recipe) -> Result<Option<ReductionStep>, ConstructError> {
        let g = self.sg.graph();
        let n = g.order();
        let (removed, merge): (Vec<usize>, Option<usize>) = match recipe.shape {
            Shape::Zero { v, .. } | Shape::One { v, .. } | Shape::Modified { v, .. } => {
                (alloc::vec![v, self.s(v)], None)
            }
            Shape::Wheel { v0, rim } => (rim.to_vec(), Some(v0)),
        };
        let mut g2h = alloc::vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if !removed.contains(&x) {
                g2h[x] = next;
                next += 1;
            }
        }
        let hn = next;
        let map_vertex = |x: usize| -> usize {
            if g2h[x] != usize::MAX {
                g2h[x]
            } else {
                merge.map_or(usize::MAX, |m| g2h[m])
            }
        };
        let map_edge = |e: Edge| -> Option<Edge> {
            let (a, b) = (map_vertex(e.u()), map_vertex(e.v()));
            if a == usize::MAX || b == usize::MAX || a == b {
                None
            } else {
                Some(Edge::new(a, b))
            }
        };
        let added = self.added(&recipe.shape);
        let added_pair: Vec<Edge> = match added {
            Some(e) => {
                let se = self.sg.image_edge(e, 1);
                if e == se || g.contains(e) || g.contains(se) {
                    return Ok(None);
                }
                alloc::vec![e, se]
            }
            None => Vec::new(),
        };

        let mut hg = Graph::empty(hn);
        for &e in g.edges() {
            if let Some(f) = map_edge(e) {
                if hg.contains(f) {
                    // contraction would create a multi-edge
                    return Ok(None);
                }
                hg.add_edge(f.u(), f.v())?;
            }
        }
        for &e in &added_pair {
            let f = map_edge(e).ok_or_else(|| ConstructError::Internal("added edge".into()))?;
            if hg.contains(f) {
                return Ok(None);
            }
            hg.add_edge(f.u(), f.v())?;
        }
        let mut generator = alloc::vec![0; hn];
        for x in 0..n {
            if g2h[x] != usize::MAX {
                generator[g2h[x]] = g2h[self.s(x)];
            }
        }
        let h = SymmetricGraph::new(hg, self.sg.case(), generator)?;
        if !h.fixed_edges(1).is_empty() {
            return Ok(None);
        }

        let hv = |x: usize| g2h[x];
        let kind = match recipe.shape {
            Shape::Zero { v1, v2, .. } => MoveKind::ZeroExt {
                v1: hv(v1),
                v2: hv(v2),
            },
            Shape::One { v1, v2, v3, .. } => MoveKind::OneExt {
                v1: hv(v1),
                v2: hv(v2),
                v3: hv(v3),
                removed: Edge::new(hv(v1), hv(v2)),
            },
            Shape::Modified { v1, v2, v3, .. } => MoveKind::ModifiedOneExt {
                v1: hv(v1),
                v2: hv(v2),
                v3: hv(v3),
                removed: Edge::new(hv(v1), hv(self.s(v2))),
            },
            Shape::Wheel { v0, rim } => {
                let hv0 = hv(v0);
                let mut attach = Vec::new();
                for w in g.neighbors(v0) {
                    if g2h[w] != usize::MAX {
                        attach.push((g2h[w], 0));
                    }
                }
                for (i, &r) in rim.iter().enumerate() {
                    for w in g.neighbors(r) {
                        if g2h[w] != usize::MAX && w != v0 {
                            attach.push((g2h[w], i + 1));
                        }
                    }
                }
                attach.sort();
                let _ = hv0;
                MoveKind::FixedVertexToW5 { v0: hv0, attach }
            }
        };
        let mv = ExtensionMove {
            kind,
            new_ids: removed.clone(),
        };
        let replay = apply_move(&h, &mv)?;
        if replay != *self.sg {
            return Err(ConstructError::Internal(alloc::format!(
                "reduction ({}) does not replay",
                recipe.case
            )));
        }

        // tree surgery
        let a = recipe.tree_a;
        let mut ta: BTreeSet<Edge> = self
            .pair
            .tree(a)
            .iter()
            .filter_map(|&e| map_edge(e))
            .collect();
        let mut tb: BTreeSet<Edge> = self
            .pair
            .tree(3 - a)
            .iter()
            .filter_map(|&e| map_edge(e))
            .collect();
        let added_h: Vec<Edge> = added_pair.iter().filter_map(|&e| map_edge(e)).collect();
        match recipe.recolour {
            None => ta.extend(added_h),
            Some(gedge) => {
                let gh = map_edge(gedge).ok_or_else(|| ConstructError::Internal("g".into()))?;
                let sgh = h.image_edge(gh, 1);
                tb.remove(&gh);
                tb.remove(&sgh);
                ta.insert(gh);
                ta.insert(sgh);
                tb.extend(added_h);
            }
        }
        let (tree1, tree2) = if a == 1 { (ta, tb) } else { (tb, ta) };
        let surgical = TreePair {
            tree1,
            tree2,
            mode: TreeMode::Invariant,
        };
        let (pair, surgery) = if surgical.validate(&h).is_ok() {
            (surgical, true)
        } else {
            match find_tree_pair(&h, TreeMode::Invariant) {
                Some(p) => (p, false),
                None => return Ok(None),
            }
        };
        Ok(Some(ReductionStep {
            graph: h,
            mv,
            pair,
            case: recipe.case,
            surgery,
        }))
    }

    // Every inverse 1-extension and modified 1-extension at v.
    fn all_shapes(&self, v: usize) -> Vec<Shape> {
        let nb = self.sg.graph().neighbors(v);
        let mut out = Vec::new();
        if nb.len() != 3 {
            return out;
        }
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let (x, y, z) = (nb[i], nb[j], nb[3 - i - j]);
                if i < j {
                    out.push(Shape::One {
                        v,
                        v1: x,
                        v2: y,
                        v3: z,
                    });
                }
                let distinct: BTreeSet<usize> = [x, y, self.s(x), self.s(y)].into_iter().collect();
                if distinct.len() == 4 {
                    out.push(Shape::Modified {
                        v,
                        v1: x,
                        v2: y,
                        v3: z,
                    });
                }
            }
        }
        out
    }
}

/// One inverse allowable extension of an admissible pair.
///
/// Degree-2 vertices are tried first (smallest id), then degree-3 vertices
/// ordered by neighbourhood intersection size 2, 0, 1, 3 and by id. If no
/// branch of the case analysis applies, every inverse 1-extension is tried and
/// certified by a tree-pair search.
pub fn reduce_step(sg: &SymmetricGraph, pair: &TreePair) -> Result<ReductionStep, ConstructError> {
    if sg.group_order() != 2 {
        return Err(violated("reductions need a Z2 action"));
    }
    let n = sg.graph().order();
    if n <= 5 {
        return Err(violated("nothing to reduce on five or fewer vertices"));
    }
    pair.validate(sg)
        .map_err(|e| violated(alloc::format!("invalid tree pair: {e}")))?;
    if pair.mode != TreeMode::Invariant {
        return Err(violated("reductions need an invariant tree pair"));
    }
    let r = Reducer { sg, pair };
    let g = sg.graph();
    let degrees = g.degrees();
    let moving = |v: usize| sg.s(v) != v;

    for v in g.vertices().filter(|&v| degrees[v] == 2 && moving(v)) {
        if let Some(recipe) = r.degree2(v) {
            if let Some(step) = r.realise(&recipe)? {
                return Ok(step);
            }
        }
    }
    let mut by_type: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in g.vertices().filter(|&v| degrees[v] == 3 && moving(v)) {
        if let Ok(k) = sg.neighborhood_intersection(v) {
            by_type.entry(k).or_default().push(v);
        }
    }
    for k in [2usize, 0, 1, 3] {
        for &v in by_type.get(&k).map(Vec::as_slice).unwrap_or(&[]) {
            let recipe = match k {
                2 => r.meet2(v),
                0 => r.meet0(v),
                1 => r.meet1(v),
                _ => r.meet3(v),
            };
            if let Some(recipe) = recipe {
                if let Some(step) = r.realise(&recipe)? {
                    return Ok(step);
                }
            }
        }
    }
    for v in g.vertices().filter(|&v| degrees[v] == 3 && moving(v)) {
        for shape in r.all_shapes(v) {
            let recipe = Recipe {
                shape,
                tree_a: 1,
                recolour: None,
                case: ReductionCase::Search,
            };
            if let Some(mut step) = r.realise(&recipe)? {
                step.surgery = false;
                return Ok(step);
            }
        }
    }
    Err(ConstructError::NotReducible(n))
}

/// A chain `W₅ = G¹ → G² → … → Gᵏ = G`.
#[derive(Clone, Debug)]
pub struct ConstructionChain {
    /// `W₅` with `θ*` under the target's case.
    pub base: SymmetricGraph,
    /// `base_map[i]` is the id in `G¹` of canonical wheel vertex `i`.
    pub base_map: Vec<usize>,
    pub moves: Vec<ExtensionMove>,
    pub cases: Vec<ReductionCase>,
    /// Tree pairs of `G¹, …, Gᵏ`.
    pub certified_intermediates: Vec<TreePair>,
    /// Number of steps whose pair needed a fresh search.
    pub searched_pairs: usize,
}

impl ConstructionChain {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// `G¹, G², …, Gᵏ`.
    pub fn intermediates(&self) -> Result<Vec<SymmetricGraph>, ConstructError> {
        let mut g = self.base.relabel(&self.base_map);
        let mut out = alloc::vec![g.clone()];
        for mv in &self.moves {
            g = apply_move(&g, mv)?;
            out.push(g.clone());
        }
        Ok(out)
    }

    pub fn replay(&self) -> Result<SymmetricGraph, ConstructError> {
        Ok(self
            .intermediates()?
            .pop()
            .expect("at least the base graph"))
    }
}

// Relabelling of canonical W5 onto a 5-vertex graph with the wheel action.
fn wheel_map(sg: &SymmetricGraph) -> Option<Vec<usize>> {
    let fixed: Vec<usize> = sg.fixed_vertices(1).into_iter().collect();
    if sg.graph().order() != 5 || fixed.len() != 1 {
        return None;
    }
    let v0 = fixed[0];
    let g = sg.graph();
    let v1 = (0..5).find(|&x| x != v0)?;
    let v2 = g
        .neighbors(v1)
        .into_iter()
        .find(|&x| x != v0 && x != sg.s(v1))?;
    let map = alloc::vec![v0, v1, v2, sg.s(v1), sg.s(v2)];
    let canon = w5_graph(sg.case()).relabel(&map);
    (canon == *sg).then_some(map)
}

/// Reduces an admissible pair down to `W₅` and returns the forward chain.
pub fn build_chain(sg: &SymmetricGraph) -> Result<ConstructionChain, ConstructError> {
    if sg.group_order() != 2 {
        return Err(ConstructError::NotAdmissible("needs a Z2 action".into()));
    }
    if !sg.fixed_edges(1).is_empty() {
        return Err(ConstructError::NotAdmissible("fixed edges present".into()));
    }
    let pair = find_tree_pair(sg, TreeMode::Invariant)
        .ok_or_else(|| ConstructError::NotAdmissible("no invariant tree pair".into()))?;
    build_chain_with(sg, pair)
}

/// As [`build_chain`], starting from a given tree pair.
pub fn build_chain_with(
    sg: &SymmetricGraph,
    pair: TreePair,
) -> Result<ConstructionChain, ConstructError> {
    let mut current = sg.clone();
    let mut current_pair = pair;
    let mut moves = Vec::new();
    let mut cases = Vec::new();
    let mut pairs = alloc::vec![current_pair.clone()];
    let mut searched = 0;
    while current.graph().order() > 5 {
        let step = reduce_step(&current, &current_pair)?;
        if !step.surgery {
            searched += 1;
        }
        moves.push(step.mv);
        cases.push(step.case);
        pairs.push(step.pair.clone());
        current = step.graph;
        current_pair = step.pair;
    }
    let base_map = wheel_map(&current).ok_or_else(|| {
        ConstructError::NotAdmissible("reduction did not end at the wheel".into())
    })?;
    moves.reverse();
    cases.reverse();
    pairs.reverse();
    Ok(ConstructionChain {
        base: w5_graph(sg.case()),
        base_map,
        moves,
        cases,
        certified_intermediates: pairs,
        searched_pairs: searched,
    })
}

/// Result of excising the two fixed edges of a half-turn pair.
#[derive(Clone, Debug)]
pub struct HatGraph {
    pub graph: SymmetricGraph,
    pub pair: TreePair,
    /// The new fixed vertex.
    pub w0: usize,
    /// The fixed edges of the original graph, the one in `tree1` first.
    pub fixed: [Edge; 2],
}

/// Replaces the two fixed edges `e = v1v2`, `f = v3v4` by a new fixed vertex
/// `w0` joined to `v1, v2, v3, v4`.
pub fn hat_graph(sg: &SymmetricGraph, pair: &TreePair) -> Result<HatGraph, ConstructError> {
    if sg.group_order() != 2 {
        return Err(violated("hat graph needs a Z2 action"));
    }
    let fixed: Vec<Edge> = sg.fixed_edges(1).into_iter().collect();
    if fixed.len() != 2 {
        return Err(violated(alloc::format!(
            "expected two fixed edges, found {}",
            fixed.len()
        )));
    }
    pair.validate(sg)
        .map_err(|e| violated(alloc::format!("invalid tree pair: {e}")))?;
    let pair = if pair.tree1.contains(&fixed[0]) {
        pair.clone()
    } else {
        pair.swap()
    };
    let (e, f) = (fixed[0], fixed[1]);
    if !pair.tree2.contains(&f) {
        return Err(violated("both fixed edges lie in one tree"));
    }
    let n = sg.graph().order();
    let w0 = n;
    let mut g = Graph::empty(n + 1);
    for &x in sg.graph().edges() {
        if x != e && x != f {
            g.add_edge(x.u(), x.v())?;
        }
    }
    for x in [e.u(), e.v(), f.u(), f.v()] {
        g.add_edge(x, w0)?;
    }
    let mut generator = sg.generator().to_vec();
    generator.push(w0);
    let hat = SymmetricGraph::new(g, sg.case(), generator)?;
    let mut tree1 = pair.tree1.clone();
    tree1.remove(&e);
    tree1.insert(Edge::new(e.u(), w0));
    tree1.insert(Edge::new(e.v(), w0));
    let mut tree2 = pair.tree2.clone();
    tree2.remove(&f);
    tree2.insert(Edge::new(f.u(), w0));
    tree2.insert(Edge::new(f.v(), w0));
    let hat_pair = TreePair {
        tree1,
        tree2,
        mode: TreeMode::Invariant,
    };
    hat_pair
        .validate(&hat)
        .map_err(|err| ConstructError::Internal(alloc::format!("hat graph pair: {err}")))?;
    Ok(HatGraph {
        graph: hat,
        pair: hat_pair,
        w0,
        fixed: [e, f],
    })
}

// ---------------------------------------------------------------------------
// Quarter-turn chains (experimental).
//
// A move adds one free orbit `v, γv, γ²v, γ³v` joined to the images of two or
// three attachment vertices, possibly deleting one orbit of four edges. The
// admissibility of every intermediate graph is established by a fresh search
// for a swapped tree pair, not by a proof.

/// An orbit-of-four vertex addition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C4Move {
    /// Neighbours of `v` in `H`.
    pub attachments: Vec<usize>,
    /// An edge of `H` whose orbit (of size four) is deleted.
    pub removed: Option<Edge>,
    /// Ids in `G` of `v, γv, γ²v, γ³v`.
    pub new_ids: [usize; 4],
}

/// The two quarter-turn base graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum C4Base {
    /// Hub fixed, rim rotated: generator `[0, 2, 3, 4, 1]`.
    Wheel,
    /// `K₄` with its vertices cycled: generator `[1, 2, 3, 0]`.
    K4,
}

impl C4Base {
    pub fn graph(self) -> SymmetricGraph {
        match self {
            C4Base::Wheel => {
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
                .expect("simple");
                SymmetricGraph::from_parts_unchecked(g, GroupCase::C4, alloc::vec![0, 2, 3, 4, 1])
            }
            C4Base::K4 => {
                let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)])
                    .expect("simple");
                SymmetricGraph::from_parts_unchecked(g, GroupCase::C4, alloc::vec![1, 2, 3, 0])
            }
        }
    }

    fn map_onto(self, sg: &SymmetricGraph) -> Option<Vec<usize>> {
        let n = sg.graph().order();
        let map = match self {
            C4Base::Wheel => {
                if n != 5 {
                    return None;
                }
                let fixed: Vec<usize> = sg.fixed_vertices(1).into_iter().collect();
                if fixed.len() != 1 {
                    return None;
                }
                let v1 = (0..5).find(|&x| x != fixed[0])?;
                let mut map = alloc::vec![fixed[0], v1];
                for k in 1..4 {
                    map.push(sg.image(v1, k));
                }
                map
            }
            C4Base::K4 => {
                if n != 4 {
                    return None;
                }
                (0..4).map(|k| sg.image(0, k)).collect()
            }
        };
        let canon = self.graph().relabel(&map);
        (canon == *sg).then_some(map)
    }
}

#[derive(Clone, Debug)]
pub struct C4Chain {
    pub base: C4Base,
    pub base_map: Vec<usize>,
    pub moves: Vec<C4Move>,
    pub certified_intermediates: Vec<TreePair>,
}

impl C4Chain {
    pub fn intermediates(&self) -> Result<Vec<SymmetricGraph>, ConstructError> {
        let mut g = self.base.graph().relabel(&self.base_map);
        let mut out = alloc::vec![g.clone()];
        for mv in &self.moves {
            g = apply_c4_move(&g, mv)?;
            out.push(g.clone());
        }
        Ok(out)
    }

    pub fn replay(&self) -> Result<SymmetricGraph, ConstructError> {
        Ok(self.intermediates()?.pop().expect("base graph"))
    }
}

pub fn apply_c4_move(h: &SymmetricGraph, mv: &C4Move) -> Result<SymmetricGraph, ConstructError> {
    if h.group_order() != 4 {
        return Err(violated("orbit-of-four moves need a Z4 action"));
    }
    let hn = h.graph().order();
    let m = h_to_g(hn, &mv.new_ids)?;
    let n = hn + 4;
    let mut generator = alloc::vec![0; n];
    for x in 0..hn {
        generator[m[x]] = m[h.image(x, 1)];
    }
    for k in 0..4 {
        generator[mv.new_ids[k]] = mv.new_ids[(k + 1) % 4];
    }
    let removed: BTreeSet<Edge> = match mv.removed {
        Some(e) => {
            if !h.graph().contains(e) {
                return Err(violated(alloc::format!("removed edge {e} is not in H")));
            }
            let orbit = h.edge_orbit(e);
            if orbit.len() != 4 {
                return Err(violated("removed edge orbit must have four edges"));
            }
            orbit.into_iter().collect()
        }
        None => BTreeSet::new(),
    };
    let mut g = Graph::empty(n);
    for e in h.graph().edges() {
        if !removed.contains(e) {
            g.add_edge(m[e.u()], m[e.v()])?;
        }
    }
    for &a in &mv.attachments {
        if a >= hn {
            return Err(violated("attachment outside H"));
        }
        for k in 0..4 {
            g.add_edge(mv.new_ids[k], m[h.image(a, k)])
                .map_err(|err| violated(alloc::format!("extension is not simple: {err}")))?;
        }
    }
    Ok(SymmetricGraph::new(g, h.case(), generator)?)
}

fn c4_admissible(sg: &SymmetricGraph) -> Option<TreePair> {
    let fixed = sg.fixed_edges(2).len();
    if !(fixed == 0 || fixed == 2) || !sg.fixed_edges(1).is_empty() {
        return None;
    }
    find_tree_pair(sg, TreeMode::Swapped)
}

fn c4_reduce(sg: &SymmetricGraph) -> Option<(SymmetricGraph, C4Move, TreePair)> {
    let g = sg.graph();
    let n = g.order();
    let degrees = g.degrees();
    let mut order: Vec<usize> = g
        .vertices()
        .filter(|&v| degrees[v] == 2 || degrees[v] == 3)
        .collect();
    order.sort_by_key(|&v| (degrees[v], v));
    for v in order {
        let orbit = sg.vertex_orbit(v);
        if orbit.len() != 4 {
            continue;
        }
        let nb = g.neighbors(v);
        if nb.iter().any(|x| orbit.contains(x)) {
            continue;
        }
        let mut g2h = alloc::vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if !orbit.contains(&x) {
                g2h[x] = next;
                next += 1;
            }
        }
        let mut base = Graph::empty(n - 4);
        for e in g.edges() {
            if !orbit.contains(&e.u()) && !orbit.contains(&e.v()) {
                base.add_edge(g2h[e.u()], g2h[e.v()]).ok()?;
            }
        }
        let mut generator = alloc::vec![0; n - 4];
        for x in 0..n {
            if g2h[x] != usize::MAX {
                generator[g2h[x]] = g2h[sg.image(x, 1)];
            }
        }
        let attachments: Vec<usize> = nb.iter().map(|&x| g2h[x]).collect();
        let new_ids = [orbit[0], orbit[1], orbit[2], orbit[3]];
        let mut options: Vec<Option<Edge>> = Vec::new();
        if nb.len() == 2 {
            options.push(None);
        } else {
            for &x in &attachments {
                for &y in &attachments {
                    if x == y {
                        continue;
                    }
                    for k in 0..4 {
                        let yk = {
                            let mut w = y;
                            for _ in 0..k {
                                w = generator[w];
                            }
                            w
                        };
                        if yk != x {
                            options.push(Some(Edge::new(x, yk)));
                        }
                    }
                }
            }
            options.sort();
            options.dedup();
        }
        for removed in options {
            let mut hg = base.clone();
            if let Some(e) = removed {
                let mut ok = true;
                let mut f = e;
                let mut orbit_edges = Vec::new();
                for _ in 0..4 {
                    if hg.contains(f) || orbit_edges.contains(&f) {
                        ok = false;
                        break;
                    }
                    orbit_edges.push(f);
                    f = f.map(|x| generator[x]);
                }
                if !ok || f != e {
                    continue;
                }
                for f in orbit_edges {
                    hg.add_edge(f.u(), f.v()).ok()?;
                }
            }
            let Ok(h) = SymmetricGraph::new(hg, sg.case(), generator.clone()) else {
                continue;
            };
            let Some(pair) = c4_admissible(&h) else {
                continue;
            };
            let mv = C4Move {
                attachments: attachments.clone(),
                removed,
                new_ids,
            };
            match apply_c4_move(&h, &mv) {
                Ok(back) if back == *sg => return Some((h, mv, pair)),
                _ => continue,
            }
        }
    }
    None
}

/// Experimental quarter-turn chain from the rotated wheel or `K₄`.
pub fn build_c4_chain(sg: &SymmetricGraph) -> Result<C4Chain, ConstructError> {
    if sg.group_order() != 4 {
        return Err(violated("quarter-turn chains need a Z4 action"));
    }
    let top = c4_admissible(sg)
        .ok_or_else(|| ConstructError::NotAdmissible("no swapped tree pair".into()))?;
    let mut current = sg.clone();
    let mut moves = Vec::new();
    let mut pairs = alloc::vec![top];
    while current.graph().order() > 5 {
        let (h, mv, pair) =
            c4_reduce(&current).ok_or(ConstructError::NotReducible(current.graph().order()))?;
        moves.push(mv);
        pairs.push(pair);
        current = h;
    }
    for base in [C4Base::Wheel, C4Base::K4] {
        if let Some(base_map) = base.map_onto(&current) {
            moves.reverse();
            pairs.reverse();
            return Ok(C4Chain {
                base,
                base_map,
                moves,
                certified_intermediates: pairs,
            });
        }
    }
    Err(ConstructError::NotReducible(current.graph().order()))
}
