//! Symmetric isostatic placements.
//!
//! All searches run in frame coordinates `q = (φ₁(x), φ₂(x))`, where the
//! norm is ℓ∞, edge colours are read off as `|Δq₁| ≷ |Δq₂|` and the isometry
//! `τ` is a signed permutation matrix. Results are mapped back to standard
//! coordinates and certified there by an exact rank computation.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::construct::{
    apply_c4_move, build_c4_chain, build_chain, hat_graph, ConstructError, ExtensionMove, MoveKind,
};
use crate::graph::{Edge, Graph, GroupCase, SymmetricGraph};
use crate::linalg::{feasible_point, frac, rat, Rational};
use crate::polynorm::{
    coloring, is_isostatic, Coloring, FacetClass, IsometryClass, IsostaticReport, LinearIsometry,
    NormError, Placement, Point, QuadNorm,
};
use crate::treepack::{
    check_admissible, for_each_tree_pair, is_spanning_tree, FailureReason, TreePair,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlacementError {
    #[error("graph is not admissible: {0}")]
    NotAdmissible(FailureReason),
    #[error("the norm has no quarter-turn isometry")]
    NoSwappingIsometry,
    #[error("isometry class {0} does not fit this group action")]
    UnsupportedTau(IsometryClass),
    #[error("placement search failed: {0}")]
    PlacementSearchFailed(String),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

fn failed(msg: impl Into<String>) -> PlacementError {
    PlacementError::PlacementSearchFailed(msg.into())
}

/// How a placement was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Placing `W₅` and following a construction chain.
    Chain,
    /// Via the graph with its two fixed edges replaced by a fixed vertex.
    HatGraph,
    /// Linear feasibility over orbit-constant sign patterns of a tree pair.
    TreeProgram,
    /// Orbit-of-four extensions from a quarter-turn base.
    QuarterChain,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Chain => "construction chain",
            Method::HatGraph => "hat graph",
            Method::TreeProgram => "tree program",
            Method::QuarterChain => "quarter-turn chain",
        })
    }
}

/// A `τ`-symmetric placement together with its certificate.
#[derive(Clone, Debug)]
pub struct SymmetricPlacement {
    pub placement: Placement,
    pub tau: LinearIsometry,
    pub coloring: Coloring,
    /// Monochrome trees, `F₁` first.
    pub pair: TreePair,
    pub report: IsostaticReport,
    pub method: Method,
}

/// The isometry class that realises a group case.
pub fn required_class(case: GroupCase) -> IsometryClass {
    match case {
        GroupCase::CsPreserving => IsometryClass::ReflectionPreserving,
        GroupCase::CsSwapping => IsometryClass::ReflectionSwapping,
        GroupCase::C2 => IsometryClass::HalfTurn,
        GroupCase::C4 => IsometryClass::QuarterTurn,
    }
}

/// Candidate isometries for a case, in a fixed order.
pub fn candidate_isometries(
    norm: &QuadNorm,
    case: GroupCase,
) -> Result<Vec<LinearIsometry>, PlacementError> {
    let class = required_class(case);
    let taus = norm.isometries_of(class);
    if taus.is_empty() {
        return Err(if class == IsometryClass::QuarterTurn {
            PlacementError::NoSwappingIsometry
        } else {
            PlacementError::UnsupportedTau(class)
        });
    }
    Ok(taus)
}

// ---------------------------------------------------------------------------
// frame-coordinate helpers

type Frame = [[i64; 2]; 2];

fn frame_apply(s: &Frame, q: &Point) -> Point {
    Point::new(
        rat(s[0][0]) * &q.x + rat(s[0][1]) * &q.y,
        rat(s[1][0]) * &q.x + rat(s[1][1]) * &q.y,
    )
}

fn frame_class(d: &Point) -> Option<FacetClass> {
    let (a, b) = (d.x.abs(), d.y.abs());
    match a.cmp(&b) {
        core::cmp::Ordering::Greater => Some(FacetClass::F1),
        core::cmp::Ordering::Less => Some(FacetClass::F2),
        core::cmp::Ordering::Equal => None,
    }
}

fn inf_norm(d: &Point) -> Rational {
    let (a, b) = (d.x.abs(), d.y.abs());
    if a > b {
        a
    } else {
        b
    }
}

// Interior point of the facet pair `class`, indexed by `t ∈ (−1, 1)`.
fn witness(class: FacetClass, t: &Rational) -> Point {
    match class {
        FacetClass::F1 => Point::new(rat(1), t.clone()),
        FacetClass::F2 => Point::new(t.clone(), rat(1)),
    }
}

fn witness_params() -> Vec<Rational> {
    let mut out = alloc::vec![Rational::zero()];
    for d in 2..6 {
        out.push(frac(1, d));
        out.push(frac(-1, d));
    }
    out
}

fn extremes() -> [Point; 2] {
    [Point::int(1, 1), Point::int(1, -1)]
}

// Intersection of the lines `p + λd` and `q + μe`.
fn meet(p: &Point, d: &Point, q: &Point, e: &Point) -> Option<Point> {
    let det = &e.x * &d.y - &d.x * &e.y;
    if det.is_zero() {
        return None;
    }
    let r = q - p;
    let lambda = (&e.x * &r.y - &r.x * &e.y) / det;
    Some(p + &d.scale(&lambda))
}

// Distinct points, strict colours, and both colour classes spanning trees.
fn frame_valid(g: &Graph, q: &[Point]) -> bool {
    let distinct: BTreeSet<&Point> = q.iter().collect();
    if distinct.len() != q.len() {
        return false;
    }
    let mut t1 = BTreeSet::new();
    let mut t2 = BTreeSet::new();
    for &e in g.edges() {
        match frame_class(&(&q[e.u()] - &q[e.v()])) {
            Some(FacetClass::F1) => {
                t1.insert(e);
            }
            Some(FacetClass::F2) => {
                t2.insert(e);
            }
            None => return false,
        }
    }
    let n = g.order();
    is_spanning_tree(n, &t1) && is_spanning_tree(n, &t2)
}

// Sets the orbit of `v` from `p(v)`.
fn fill_orbit(sg: &SymmetricGraph, s: &Frame, q: &mut [Option<Point>], v: usize, p: &Point) {
    let mut w = v;
    let mut x = p.clone();
    loop {
        q[w] = Some(x.clone());
        w = sg.image(w, 1);
        x = frame_apply(s, &x);
        if w == v {
            break;
        }
    }
}

fn grid_offsets(k: i64) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = Vec::new();
    for i in -k..=k {
        for j in -k..=k {
            if i.abs().max(j.abs()) == k {
                out.push((i, j));
            }
        }
    }
    out.sort_by_key(|&(i, j)| (i.abs() + j.abs(), i, j));
    out
}

const HALVINGS: usize = 64;

// Positions for the orbit of `v` near the anchors, until `frame_valid` holds.
fn search_orbit(
    sg: &SymmetricGraph,
    s: &Frame,
    base: &[Option<Point>],
    v: usize,
    anchors: &[Point],
) -> Option<Vec<Point>> {
    let existing: Vec<&Point> = base.iter().flatten().collect();
    let try_point = |p: &Point| -> Option<Vec<Point>> {
        let mut q = base.to_vec();
        fill_orbit(sg, s, &mut q, v, p);
        let q: Vec<Point> = q.into_iter().collect::<Option<Vec<_>>>()?;
        frame_valid(sg.graph(), &q).then_some(q)
    };
    for a in anchors {
        if let Some(q) = try_point(a) {
            return Some(q);
        }
    }
    for a in anchors {
        let mut r = existing
            .iter()
            .map(|p| inf_norm(&(*p - a)))
            .filter(|d| d.is_positive())
            .min()
            .map(|d| d / rat(2))
            .unwrap_or_else(|| rat(1));
        for _ in 0..HALVINGS {
            for k in 1..=2 {
                let step = &r / rat(k);
                for (i, j) in grid_offsets(k) {
                    let p = Point::new(&a.x + &step * rat(i), &a.y + &step * rat(j));
                    if let Some(q) = try_point(&p) {
                        return Some(q);
                    }
                }
            }
            r /= rat(2);
        }
    }
    None
}

fn frame_of(s: &LinearIsometry) -> Frame {
    s.frame
}

// Maps frame coordinates back and certifies.
fn finish(
    sg: &SymmetricGraph,
    q: &[Point],
    tau: &LinearIsometry,
    norm: &QuadNorm,
    method: Method,
) -> Result<SymmetricPlacement, PlacementError> {
    let coords: Vec<Point> = q.iter().map(|x| norm.from_frame(x)).collect();
    let placement = Placement::new(coords)?;
    certify(sg, placement, tau, norm, method)
}

/// Checks symmetry and isostaticity of a placement and packages it.
pub fn certify(
    sg: &SymmetricGraph,
    placement: Placement,
    tau: &LinearIsometry,
    norm: &QuadNorm,
    method: Method,
) -> Result<SymmetricPlacement, PlacementError> {
    for v in sg.graph().vertices() {
        if tau.apply(placement.point(v)) != *placement.point(sg.image(v, 1)) {
            return Err(failed(alloc::format!(
                "placement is not τ-symmetric at vertex {v}"
            )));
        }
    }
    let col = coloring(sg.graph(), &placement, norm)?;
    let report = is_isostatic(sg.graph(), &placement, norm)?;
    if !report.isostatic {
        return Err(failed(alloc::format!(
            "rank {} below {}",
            report.rank,
            2 * sg.graph().order() - 2
        )));
    }
    let pair = TreePair {
        tree1: col.monochrome(FacetClass::F1),
        tree2: col.monochrome(FacetClass::F2),
        mode: sg.case().tree_mode(),
    };
    Ok(SymmetricPlacement {
        placement,
        tau: tau.clone(),
        coloring: col,
        pair,
        report,
        method,
    })
}

// ---------------------------------------------------------------------------
// the wheel

fn place_w5_frame(sg: &SymmetricGraph, s: &Frame) -> Option<Vec<Point>> {
    let n = sg.graph().order();
    let mut base: Vec<Option<Point>> = alloc::vec![None; n];
    base[0] = Some(Point::origin());
    let ts = witness_params();
    if sg.group_order() == 4 {
        let anchors: Vec<Point> = ts
            .iter()
            .flat_map(|t| [witness(FacetClass::F1, t), witness(FacetClass::F2, t)])
            .collect();
        return search_orbit(sg, s, &base, 1, &anchors);
    }
    for t in &ts {
        let x1 = witness(FacetClass::F1, t);
        if frame_apply(s, &x1) == x1 {
            continue;
        }
        let mut b = base.clone();
        fill_orbit(sg, s, &mut b, 1, &x1);
        let p3 = b[3].clone()?;
        let mut anchors = Vec::new();
        for y in extremes() {
            for u in &ts {
                if let Some(a) = meet(&Point::origin(), &witness(FacetClass::F2, u), &p3, &y) {
                    anchors.push(a);
                }
            }
        }
        anchors.push(witness(FacetClass::F2, t));
        if let Some(q) = search_orbit(sg, s, &b, 2, &anchors) {
            return Some(q);
        }
    }
    None
}

/// A `τ`-symmetric isostatic placement of the wheel.
///
/// For reflections and the half-turn this is the wheel with hub 0 and rim
/// 1-2-3-4 acted on by 1↔3, 2↔4; for a quarter turn the rim is rotated.
pub fn place_w5(
    norm: &QuadNorm,
    tau: &LinearIsometry,
) -> Result<SymmetricPlacement, PlacementError> {
    let sg = match tau.class {
        IsometryClass::ReflectionPreserving => crate::construct::w5_graph(GroupCase::CsPreserving),
        IsometryClass::HalfTurn => crate::construct::w5_graph(GroupCase::C2),
        IsometryClass::QuarterTurn => crate::construct::C4Base::Wheel.graph(),
        other => return Err(PlacementError::UnsupportedTau(other)),
    };
    let q = place_w5_frame(&sg, &frame_of(tau)).ok_or_else(|| failed("wheel"))?;
    finish(&sg, &q, tau, norm, Method::Chain)
}

// ---------------------------------------------------------------------------
// extensions

fn h_positions(h_order: usize, new_ids: &[usize]) -> Vec<usize> {
    let n = h_order + new_ids.len();
    (0..n).filter(|x| !new_ids.contains(x)).collect()
}

fn extend_frame(
    h: &SymmetricGraph,
    g: &SymmetricGraph,
    qh: &[Point],
    mv: &ExtensionMove,
    s: &Frame,
) -> Option<Vec<Point>> {
    let m = h_positions(h.graph().order(), &mv.new_ids);
    let mut base: Vec<Option<Point>> = alloc::vec![None; g.graph().order()];
    for (x, p) in qh.iter().enumerate() {
        base[m[x]] = Some(p.clone());
    }
    let ts = witness_params();
    let class_h = |e: Edge| frame_class(&(&qh[e.u()] - &qh[e.v()]));
    let mut anchors = Vec::new();
    match &mv.kind {
        MoveKind::ZeroExt { v1, v2 } => {
            let (p1, p2) = (&qh[*v1], &qh[*v2]);
            for t in &ts {
                for (c1, c2) in [
                    (FacetClass::F1, FacetClass::F2),
                    (FacetClass::F2, FacetClass::F1),
                ] {
                    if let Some(a) = meet(p1, &witness(c1, t), p2, &witness(c2, t)) {
                        anchors.push(a);
                    }
                }
            }
        }
        MoveKind::OneExt {
            v1,
            v2,
            v3,
            removed,
        } => {
            let c = class_h(*removed)?;
            let (p1, p2, p3) = (&qh[*v1], &qh[*v2], &qh[*v3]);
            let dir = p2 - p1;
            for t in &ts {
                if let Some(a) = meet(p1, &dir, p3, &witness(c.opposite(), t)) {
                    anchors.push(a);
                }
            }
        }
        MoveKind::ModifiedOneExt {
            v1,
            v2,
            v3,
            removed,
        } => {
            let c = class_h(*removed)?;
            let (p1, p2, p3) = (&qh[*v1], &qh[*v2], &qh[*v3]);
            for t in &ts {
                for y in extremes() {
                    for p in [p2, p1] {
                        if let Some(a) = meet(p, &witness(c, t), p3, &y) {
                            anchors.push(a);
                        }
                    }
                }
            }
        }
        MoveKind::FixedVertexToW5 { v0, attach } => {
            return extend_wheel(h, g, qh, &base, *v0, attach, &mv.new_ids, s);
        }
    }
    // midpoints as a last resort
    let nb = g.graph().neighbors(mv.new_ids[0]);
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if let (Some(pa), Some(pb)) = (&base[a], &base[b]) {
                anchors.push((pa + pb).scale(&frac(1, 2)));
            }
        }
    }
    search_orbit(g, s, &base, mv.new_ids[0], &anchors)
}

#[allow(clippy::too_many_arguments)]
fn extend_wheel(
    h: &SymmetricGraph,
    g: &SymmetricGraph,
    qh: &[Point],
    base: &[Option<Point>],
    v0: usize,
    attach: &[(usize, usize)],
    rim: &[usize],
    s: &Frame,
) -> Option<Vec<Point>> {
    let _ = (h, attach);
    let wheel = crate::construct::w5_graph(g.case());
    let local = place_w5_frame(&wheel, s)?;
    let centre = qh[v0].clone();
    let mut lambda = rat(1);
    for _ in 0..48 {
        let mut q = base.to_vec();
        for i in 0..4 {
            q[rim[i]] = Some(&centre + &local[i + 1].scale(&lambda));
        }
        if let Some(q) = q.into_iter().collect::<Option<Vec<_>>>() {
            if frame_valid(g.graph(), &q) {
                return Some(q);
            }
        }
        lambda /= rat(2);
    }
    None
}

/// Extends a placement of `h` to `apply_move(h, mv)`.
pub fn extend_placement(
    h: &SymmetricGraph,
    ph: &SymmetricPlacement,
    mv: &ExtensionMove,
    norm: &QuadNorm,
) -> Result<SymmetricPlacement, PlacementError> {
    let g = crate::construct::apply_move(h, mv)?;
    let qh: Vec<Point> = ph
        .placement
        .coords
        .iter()
        .map(|p| norm.to_frame(p))
        .collect();
    let s = frame_of(&ph.tau);
    let q = extend_frame(h, &g, &qh, mv, &s)
        .ok_or_else(|| failed(alloc::format!("no position for {mv}")))?;
    finish(&g, &q, &ph.tau, norm, ph.method)
}

fn chain_frame(sg: &SymmetricGraph, s: &Frame) -> Result<Vec<Point>, PlacementError> {
    let chain = build_chain(sg)?;
    let graphs = chain.intermediates()?;
    let local = place_w5_frame(&chain.base, s).ok_or_else(|| failed("wheel"))?;
    let mut q = alloc::vec![Point::origin(); 5];
    for (i, p) in local.into_iter().enumerate() {
        q[chain.base_map[i]] = p;
    }
    for (i, mv) in chain.moves.iter().enumerate() {
        q = extend_frame(&graphs[i], &graphs[i + 1], &q, mv, s)
            .ok_or_else(|| failed(alloc::format!("no position for step {}: {mv}", i + 1)))?;
    }
    Ok(q)
}

/// Placement along a construction chain (facet-preserving `τ`, no fixed
/// edges).
pub fn place_by_chain(
    sg: &SymmetricGraph,
    tau: &LinearIsometry,
    norm: &QuadNorm,
) -> Result<SymmetricPlacement, PlacementError> {
    let q = chain_frame(sg, &frame_of(tau))?;
    finish(sg, &q, tau, norm, Method::Chain)
}

/// Half-turn placement of a graph with two fixed edges, through its hat
/// graph.
pub fn place_by_hat(
    sg: &SymmetricGraph,
    pair: &TreePair,
    tau: &LinearIsometry,
    norm: &QuadNorm,
) -> Result<SymmetricPlacement, PlacementError> {
    let hat = hat_graph(sg, pair)?;
    let q = chain_frame(&hat.graph, &frame_of(tau))?;
    let n = sg.graph().order();
    finish(sg, &q[..n], tau, norm, Method::HatGraph)
}

// ---------------------------------------------------------------------------
// quarter turns

fn c4_anchors(g: &SymmetricGraph, base: &[Option<Point>], v: usize) -> Vec<Point> {
    let ts = witness_params();
    let pts: Vec<Point> = g
        .graph()
        .neighbors(v)
        .into_iter()
        .filter_map(|a| base[a].clone())
        .collect();
    let mut anchors = Vec::new();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if i == j {
                continue;
            }
            for t in &ts[..3] {
                if let Some(a) = meet(
                    &pts[i],
                    &witness(FacetClass::F1, t),
                    &pts[j],
                    &witness(FacetClass::F2, t),
                ) {
                    anchors.push(a);
                }
            }
        }
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            anchors.push((&pts[i] + &pts[j]).scale(&frac(1, 2)));
        }
    }
    anchors.extend(pts);
    anchors
}

/// Placement along an orbit-of-four chain (experimental).
pub fn place_by_c4_chain(
    sg: &SymmetricGraph,
    tau: &LinearIsometry,
    norm: &QuadNorm,
) -> Result<SymmetricPlacement, PlacementError> {
    let chain = build_c4_chain(sg)?;
    let s = frame_of(tau);
    let base = chain.base.graph();
    let local = match chain.base {
        crate::construct::C4Base::Wheel => place_w5_frame(&base, &s),
        crate::construct::C4Base::K4 => {
            let empty = alloc::vec![None; 4];
            let anchors: Vec<Point> = witness_params()
                .iter()
                .map(|t| witness(FacetClass::F1, t))
                .collect();
            search_orbit(&base, &s, &empty, 0, &anchors)
        }
    }
    .ok_or_else(|| failed("quarter-turn base"))?;
    let mut q = alloc::vec![Point::origin(); local.len()];
    for (i, p) in local.into_iter().enumerate() {
        q[chain.base_map[i]] = p;
    }
    let mut h = base.relabel(&chain.base_map);
    for mv in &chain.moves {
        let g = apply_c4_move(&h, mv)?;
        let m = h_positions(h.graph().order(), &mv.new_ids);
        let mut b: Vec<Option<Point>> = alloc::vec![None; g.graph().order()];
        for (x, p) in q.iter().enumerate() {
            b[m[x]] = Some(p.clone());
        }
        let anchors = c4_anchors(&g, &b, mv.new_ids[0]);
        q = search_orbit(&g, &s, &b, mv.new_ids[0], &anchors)
            .ok_or_else(|| failed("quarter-turn extension"))?;
        h = g;
    }
    finish(sg, &q, tau, norm, Method::QuarterChain)
}

// ---------------------------------------------------------------------------
// tree programs

// A linear form in the program variables.
type Form = Vec<Rational>;

fn kernel_basis(s: &Frame, m: usize) -> Vec<[i64; 2]> {
    // S^m − I
    let mut p = [[1i64, 0], [0, 1]];
    for _ in 0..m {
        p = [
            [
                s[0][0] * p[0][0] + s[0][1] * p[1][0],
                s[0][0] * p[0][1] + s[0][1] * p[1][1],
            ],
            [
                s[1][0] * p[0][0] + s[1][1] * p[1][0],
                s[1][0] * p[0][1] + s[1][1] * p[1][1],
            ],
        ];
    }
    let k = [[p[0][0] - 1, p[0][1]], [p[1][0], p[1][1] - 1]];
    let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
    if k == [[0, 0], [0, 0]] {
        alloc::vec![[1, 0], [0, 1]]
    } else if det != 0 {
        Vec::new()
    } else {
        let r = if k[0] != [0, 0] { k[0] } else { k[1] };
        let g = num_integer::gcd(r[0], r[1]);
        alloc::vec![[-r[1] / g, r[0] / g]]
    }
}

struct Program {
    // per vertex, the forms of its two frame coordinates
    coords: Vec<[Form; 2]>,
    nz: usize,
}

impl Program {
    fn new(sg: &SymmetricGraph, s: &Frame) -> Self {
        let n = sg.graph().order();
        let orbits = sg.orbits().vertex_orbits;
        let mut bases = Vec::new();
        let mut nz = 0;
        for orbit in &orbits {
            let b = kernel_basis(s, orbit.len());
            bases.push((nz, b.clone()));
            nz += b.len();
        }
        let zero = || alloc::vec![Rational::zero(); nz];
        let mut coords: Vec<[Form; 2]> = (0..n).map(|_| [zero(), zero()]).collect();
        for (orbit, (start, basis)) in orbits.iter().zip(&bases) {
            for (i, b) in basis.iter().enumerate() {
                let mut v = [b[0], b[1]];
                for &w in orbit {
                    coords[w][0][start + i] = rat(v[0]);
                    coords[w][1][start + i] = rat(v[1]);
                    v = [
                        s[0][0] * v[0] + s[0][1] * v[1],
                        s[1][0] * v[0] + s[1][1] * v[1],
                    ];
                }
            }
        }
        Program { coords, nz }
    }

    fn delta(&self, e: Edge) -> [Form; 2] {
        let (u, w) = e.ends();
        let d = |k: usize| -> Form {
            self.coords[u][k]
                .iter()
                .zip(&self.coords[w][k])
                .map(|(a, b)| a - b)
                .collect()
        };
        [d(0), d(1)]
    }

    fn eval(&self, z: &[Rational]) -> Vec<Point> {
        let dot = |f: &Form| -> Rational { f.iter().zip(z).map(|(a, b)| a * b).sum() };
        self.coords
            .iter()
            .map(|c| Point::new(dot(&c[0]), dot(&c[1])))
            .collect()
    }
}

fn frame_swaps(s: &Frame) -> bool {
    s[0][0] == 0
}

// Edge orbits with their target class, or None if the pair is incompatible
// with `s`.
fn targets(sg: &SymmetricGraph, pair: &TreePair, s: &Frame) -> Option<Vec<(Edge, FacetClass)>> {
    let swaps = frame_swaps(s);
    let mut out = Vec::new();
    for orbit in sg.orbits().edge_orbits {
        let e = orbit[0];
        let c = FacetClass::from_index(pair.tree_of(e)?);
        let mut f = e;
        for k in 0..sg.group_order() {
            let expected = if swaps && k % 2 == 1 { c.opposite() } else { c };
            if FacetClass::from_index(pair.tree_of(f)?) != expected {
                return None;
            }
            f = sg.image_edge(f, 1);
        }
        out.push((e, c));
    }
    Some(out)
}

fn strict_rows(delta: &[Form; 2], class: FacetClass, sigma: i64) -> [Form; 2] {
    let (major, minor) = match class {
        FacetClass::F1 => (&delta[0], &delta[1]),
        FacetClass::F2 => (&delta[1], &delta[0]),
    };
    let sg = rat(sigma);
    let plus: Form = major.iter().zip(minor).map(|(a, b)| &sg * a + b).collect();
    let minus: Form = major.iter().zip(minor).map(|(a, b)| &sg * a - b).collect();
    [plus, minus]
}

fn program_solve(sg: &SymmetricGraph, pair: &TreePair, s: &Frame) -> Option<Vec<Point>> {
    let goals = targets(sg, pair, s)?;
    let prog = Program::new(sg, s);
    let deltas: Vec<[Form; 2]> = goals.iter().map(|(e, _)| prog.delta(*e)).collect();
    if deltas
        .iter()
        .any(|d| d.iter().all(|f| f.iter().all(Zero::is_zero)))
    {
        return None;
    }
    let mut rows: Vec<Form> = Vec::new();
    let z = dfs(&goals, &deltas, 0, &mut rows, prog.nz)?;
    // perturb away from coincidences
    let dir: Vec<Rational> = (0..prog.nz)
        .map(|i| frac(((i * 7 + 3) % 11) as i64 - 5, (i + 2) as i64))
        .collect();
    let all_rows: Vec<Form> = goals
        .iter()
        .zip(&deltas)
        .flat_map(|((_, c), d)| {
            let sigma = sign_of(&prog, d, *c, &z);
            strict_rows(d, *c, sigma)
        })
        .collect();
    let mut eps = Rational::one();
    for k in 0..64 {
        let zz: Vec<Rational> = if k == 0 {
            z.clone()
        } else {
            z.iter().zip(&dir).map(|(a, b)| a + &eps * b).collect()
        };
        if k > 0 {
            eps /= rat(2);
        }
        let ok = all_rows.iter().all(|r| {
            let v: Rational = r.iter().zip(&zz).map(|(a, b)| a * b).sum();
            v.is_positive()
        });
        if !ok {
            continue;
        }
        let q = prog.eval(&zz);
        if frame_valid(sg.graph(), &q) {
            return Some(q);
        }
    }
    None
}

fn sign_of(prog: &Program, d: &[Form; 2], c: FacetClass, z: &[Rational]) -> i64 {
    let _ = prog;
    let f = match c {
        FacetClass::F1 => &d[0],
        FacetClass::F2 => &d[1],
    };
    let v: Rational = f.iter().zip(z).map(|(a, b)| a * b).sum();
    if v.is_negative() {
        -1
    } else {
        1
    }
}

fn dfs(
    goals: &[(Edge, FacetClass)],
    deltas: &[[Form; 2]],
    i: usize,
    rows: &mut Vec<Form>,
    nz: usize,
) -> Option<Vec<Rational>> {
    if i == goals.len() {
        let b = alloc::vec![rat(1); rows.len()];
        let _ = nz;
        return feasible_point(rows, &b);
    }
    let signs: &[i64] = if i == 0 { &[1] } else { &[1, -1] };
    for &sigma in signs {
        let [a, b] = strict_rows(&deltas[i], goals[i].1, sigma);
        rows.push(a);
        rows.push(b);
        let ones = alloc::vec![rat(1); rows.len()];
        if feasible_point(rows, &ones).is_some() {
            if let Some(z) = dfs(goals, deltas, i + 1, rows, nz) {
                rows.truncate(rows.len() - 2);
                return Some(z);
            }
        }
        rows.truncate(rows.len() - 2);
    }
    None
}

/// A `τ`-symmetric placement whose monochrome trees are `pair`, `tree1`
/// coloured `F₁`, found by exact linear feasibility over sign patterns.
/// `None` when no sign pattern is feasible.
pub fn placement_from_trees(
    sg: &SymmetricGraph,
    pair: &TreePair,
    norm: &QuadNorm,
    tau: &LinearIsometry,
) -> Option<SymmetricPlacement> {
    let q = program_solve(sg, pair, &frame_of(tau))?;
    finish(sg, &q, tau, norm, Method::TreeProgram).ok()
}

/// Tries every symmetric tree pair, both colour orders, and every isometry of
/// the required class. This decides whether a symmetric isostatic placement
/// exists at all.
pub fn search_placement(
    sg: &SymmetricGraph,
    norm: &QuadNorm,
) -> Result<SymmetricPlacement, PlacementError> {
    let taus = candidate_isometries(norm, sg.case())?;
    let mode = sg.case().tree_mode();
    let mut found = None;
    for_each_tree_pair(sg, mode, |pair| {
        for p in [pair.clone(), pair.swap()] {
            for tau in &taus {
                if let Some(sp) = placement_from_trees(sg, &p, norm, tau) {
                    found = Some(sp);
                    return false;
                }
            }
        }
        true
    });
    found.ok_or_else(|| failed("no tree pair admits a placement"))
}

/// A symmetric isostatic placement of an admissible pair.
///
/// Reflections preserving the facet pairs and half-turns without fixed edges
/// follow a construction chain; half-turns with two fixed edges go through
/// the hat graph; the facet-swapping reflection and quarter turns are solved
/// from a tree pair. The tree program is also the fallback for every case.
pub fn synthesize(
    sg: &SymmetricGraph,
    norm: &QuadNorm,
) -> Result<SymmetricPlacement, PlacementError> {
    let report = check_admissible(sg);
    if !report.admissible {
        return Err(PlacementError::NotAdmissible(
            report.failure_reason.unwrap_or(FailureReason::NoPacking),
        ));
    }
    let taus = candidate_isometries(norm, sg.case())?;
    let pair = report.tree_pair.clone().expect("admissible");
    let mut last = failed("no isometry tried");
    for tau in &taus {
        let attempt = match sg.case() {
            GroupCase::CsPreserving => place_by_chain(sg, tau, norm),
            GroupCase::C2 if report.fixed_edge_count == 0 => place_by_chain(sg, tau, norm),
            GroupCase::C2 => place_by_hat(sg, &pair, tau, norm),
            GroupCase::CsSwapping => placement_from_trees(sg, &pair, norm, tau)
                .or_else(|| placement_from_trees(sg, &pair.swap(), norm, tau))
                .ok_or_else(|| failed("tree program infeasible")),
            GroupCase::C4 => place_by_c4_chain(sg, tau, norm),
        };
        match attempt {
            Ok(sp) => return Ok(sp),
            Err(e) => last = e,
        }
    }
    search_placement(sg, norm).map_err(|_| last)
}

/// Whether `sg` with `tau` and coordinates `placement` is a symmetric
/// isostatic framework; returns the report on success.
pub fn verify_placement(
    sg: &SymmetricGraph,
    placement: &Placement,
    tau: &LinearIsometry,
    norm: &QuadNorm,
) -> Result<SymmetricPlacement, PlacementError> {
    certify(sg, placement.clone(), tau, norm, Method::TreeProgram)
}
