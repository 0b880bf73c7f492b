//! Norms on the plane whose unit ball is a parallelogram.
//!
//! A [`QuadNorm`] is given by two independent linear functionals `φ₁, φ₂`;
//! its unit ball is `{x : max(|φ₁(x)|, |φ₂(x)|) ≤ 1}` with facets
//! `±F₁ = {φ₁ = ±1, |φ₂| ≤ 1}` and `±F₂ = {φ₂ = ±1, |φ₁| ≤ 1}`.
//!
//! Writing `M` for the matrix with rows `φ₁, φ₂`, the map `x ↦ Mx` is an
//! isometry onto `(ℝ², ℓ∞)`. We call `Mx` the *frame* coordinates of `x`;
//! in the frame every linear isometry is a signed permutation matrix.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{Edge, Graph};
pub use crate::linalg::Rational;
use crate::linalg::{frac, rank, rat};
use crate::treepack::is_spanning_tree;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }

    pub fn origin() -> Self {
        Point::int(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-&self.x, -&self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A 2×2 rational matrix, row-major.
pub type Matrix2 = [[Rational; 2]; 2];

pub fn apply(m: &Matrix2, p: &Point) -> Point {
    Point::new(
        &m[0][0] * &p.x + &m[0][1] * &p.y,
        &m[1][0] * &p.x + &m[1][1] * &p.y,
    )
}

fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn det(m: &Matrix2) -> Rational {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormError {
    #[error("the functionals are linearly dependent")]
    DegenerateBall,
    #[error("edge {0} is not well-positioned")]
    NotWellPositioned(Edge),
    #[error("vertices {0} and {1} share a position")]
    CoincidentPoints(usize, usize),
    #[error("placement has {found} points for a graph on {expected} vertices")]
    WrongVertexCount { expected: usize, found: usize },
}

/// The facet pair `[F₁]` or `[F₂]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FacetClass {
    F1,
    F2,
}

impl FacetClass {
    pub fn opposite(self) -> FacetClass {
        match self {
            FacetClass::F1 => FacetClass::F2,
            FacetClass::F2 => FacetClass::F1,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            FacetClass::F1 => 1,
            FacetClass::F2 => 2,
        }
    }

    pub fn from_index(i: u8) -> FacetClass {
        if i == 1 {
            FacetClass::F1
        } else {
            FacetClass::F2
        }
    }
}

impl fmt::Display for FacetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[F{}]", self.index())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNorm {
    phi1: [Rational; 2],
    phi2: [Rational; 2],
    // inverse of the frame matrix
    inv: Matrix2,
}

impl QuadNorm {
    pub fn new(phi1: [Rational; 2], phi2: [Rational; 2]) -> Result<Self, NormError> {
        let m = [phi1.clone(), phi2.clone()];
        let d = det(&m);
        if d.is_zero() {
            return Err(NormError::DegenerateBall);
        }
        let inv = [
            [&m[1][1] / &d, -&m[0][1] / &d],
            [-&m[1][0] / &d, &m[0][0] / &d],
        ];
        Ok(QuadNorm { phi1, phi2, inv })
    }

    /// The ℓ∞ norm: `φ₁ = x`, `φ₂ = y`.
    pub fn linf() -> Self {
        QuadNorm::new([rat(1), rat(0)], [rat(0), rat(1)]).expect("independent")
    }

    /// The diamond ball: `φ₁ = (x + y)/2`, `φ₂ = (x − y)/2`. Its value is
    /// half the ℓ¹ norm; the functionals fix the scale.
    pub fn l1() -> Self {
        QuadNorm::new([frac(1, 2), frac(1, 2)], [frac(1, 2), frac(-1, 2)]).expect("independent")
    }

    pub fn phi1(&self) -> &[Rational; 2] {
        &self.phi1
    }

    pub fn phi2(&self) -> &[Rational; 2] {
        &self.phi2
    }

    pub fn frame_matrix(&self) -> Matrix2 {
        [self.phi1.clone(), self.phi2.clone()]
    }

    pub fn eval(&self, class: FacetClass, x: &Point) -> Rational {
        let phi = match class {
            FacetClass::F1 => &self.phi1,
            FacetClass::F2 => &self.phi2,
        };
        &phi[0] * &x.x + &phi[1] * &x.y
    }

    /// Frame coordinates `(φ₁(x), φ₂(x))`.
    pub fn to_frame(&self, x: &Point) -> Point {
        Point::new(self.eval(FacetClass::F1, x), self.eval(FacetClass::F2, x))
    }

    pub fn from_frame(&self, q: &Point) -> Point {
        apply(&self.inv, q)
    }

    pub fn norm_value(&self, x: &Point) -> Rational {
        let a = self.eval(FacetClass::F1, x).abs();
        let b = self.eval(FacetClass::F2, x).abs();
        if a >= b {
            a
        } else {
            b
        }
    }

    /// Facet pair containing `x/‖x‖` in its relative interior, or `None` when
    /// `x/‖x‖` is an extreme point (or `x = 0`).
    pub fn facet_class(&self, x: &Point) -> Option<FacetClass> {
        let a = self.eval(FacetClass::F1, x).abs();
        let b = self.eval(FacetClass::F2, x).abs();
        match a.cmp(&b) {
            core::cmp::Ordering::Greater => Some(FacetClass::F1),
            core::cmp::Ordering::Less => Some(FacetClass::F2),
            core::cmp::Ordering::Equal => None,
        }
    }

    /// The four extreme points of the unit ball.
    pub fn extreme_points(&self) -> [Point; 4] {
        let f = |a: i64, b: i64| self.from_frame(&Point::int(a, b));
        [f(1, 1), f(-1, 1), f(-1, -1), f(1, -1)]
    }

    /// Every linear isometry of the norm, classified.
    ///
    /// A linear map preserves the ball iff it permutes the extreme points,
    /// i.e. iff it is `M⁻¹ S M` for one of the eight signed permutation
    /// matrices `S`.
    pub fn isometries(&self) -> Vec<LinearIsometry> {
        let m = self.frame_matrix();
        let mut out = Vec::with_capacity(8);
        for frame in SIGNED_PERMUTATIONS {
            let s: Matrix2 = [
                [rat(frame[0][0]), rat(frame[0][1])],
                [rat(frame[1][0]), rat(frame[1][1])],
            ];
            let matrix = mul(&self.inv, &mul(&s, &m));
            let class = classify(&frame, &matrix);
            out.push(LinearIsometry {
                matrix,
                frame,
                class,
            });
        }
        out
    }

    pub fn isometries_of(&self, class: IsometryClass) -> Vec<LinearIsometry> {
        self.isometries()
            .into_iter()
            .filter(|t| t.class == class)
            .collect()
    }

    /// The isometry with the given frame matrix.
    pub fn isometry_from_frame(&self, frame: [[i64; 2]; 2]) -> Option<LinearIsometry> {
        self.isometries().into_iter().find(|t| t.frame == frame)
    }

    /// Recognises `matrix` as an isometry of this norm.
    pub fn isometry_from_matrix(&self, matrix: &Matrix2) -> Option<LinearIsometry> {
        self.isometries().into_iter().find(|t| &t.matrix == matrix)
    }
}

const SIGNED_PERMUTATIONS: [[[i64; 2]; 2]; 8] = [
    [[1, 0], [0, 1]],
    [[-1, 0], [0, -1]],
    [[1, 0], [0, -1]],
    [[-1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1], [-1, 0]],
    [[0, -1], [1, 0]],
    [[0, 1], [-1, 0]],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IsometryClass {
    Identity,
    /// Involution with determinant −1 mapping each facet pair to itself.
    ReflectionPreserving,
    /// Involution with determinant −1 exchanging the facet pairs.
    ReflectionSwapping,
    /// `−I`.
    HalfTurn,
    /// Euclidean rotation by ±π/2.
    QuarterTurn,
    /// Order-four isometry that is not a Euclidean rotation.
    Other,
}

impl IsometryClass {
    pub fn preserves_facets(self) -> bool {
        matches!(
            self,
            IsometryClass::Identity | IsometryClass::ReflectionPreserving | IsometryClass::HalfTurn
        )
    }
}

impl fmt::Display for IsometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IsometryClass::Identity => "identity",
            IsometryClass::ReflectionPreserving => "reflection (facet-preserving)",
            IsometryClass::ReflectionSwapping => "reflection (facet-swapping)",
            IsometryClass::HalfTurn => "half-turn",
            IsometryClass::QuarterTurn => "quarter-turn",
            IsometryClass::Other => "other",
        };
        f.write_str(s)
    }
}

fn classify(frame: &[[i64; 2]; 2], matrix: &Matrix2) -> IsometryClass {
    let diagonal = frame[0][1] == 0;
    let det = frame[0][0] * frame[1][1] - frame[0][1] * frame[1][0];
    match (diagonal, det) {
        (true, 1) if frame[0][0] == 1 => IsometryClass::Identity,
        (true, 1) => IsometryClass::HalfTurn,
        (true, _) => IsometryClass::ReflectionPreserving,
        (false, -1) => IsometryClass::ReflectionSwapping,
        _ => {
            let zero = Rational::zero();
            let one = Rational::one();
            let rotation = matrix[0][0] == zero
                && matrix[1][1] == zero
                && ((matrix[0][1] == -&one && matrix[1][0] == one)
                    || (matrix[0][1] == one && matrix[1][0] == -&one));
            if rotation {
                IsometryClass::QuarterTurn
            } else {
                IsometryClass::Other
            }
        }
    }
}

/// A linear isometry of a [`QuadNorm`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearIsometry {
    /// Matrix in standard coordinates.
    pub matrix: Matrix2,
    /// The same map in frame coordinates: a signed permutation matrix.
    pub frame: [[i64; 2]; 2],
    pub class: IsometryClass,
}

impl LinearIsometry {
    pub fn apply(&self, p: &Point) -> Point {
        apply(&self.matrix, p)
    }

    pub fn apply_power(&self, p: &Point, k: usize) -> Point {
        let mut q = p.clone();
        for _ in 0..k {
            q = self.apply(&q);
        }
        q
    }

    pub fn apply_frame(&self, q: &Point) -> Point {
        let f = &self.frame;
        Point::new(
            rat(f[0][0]) * &q.x + rat(f[0][1]) * &q.y,
            rat(f[1][0]) * &q.x + rat(f[1][1]) * &q.y,
        )
    }

    pub fn preserves_facets(&self) -> bool {
        self.frame[0][1] == 0
    }

    /// Smallest `k ≥ 1` with `τᵏ = I`.
    pub fn order(&self) -> usize {
        match self.class {
            IsometryClass::Identity => 1,
            IsometryClass::QuarterTurn | IsometryClass::Other => 4,
            _ => 2,
        }
    }
}

/// Vertex positions, indexed by vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Placement {
    pub coords: Vec<Point>,
}

impl Placement {
    /// Rejects coincident points.
    pub fn new(coords: Vec<Point>) -> Result<Self, NormError> {
        let mut seen: BTreeMap<&Point, usize> = BTreeMap::new();
        for (i, p) in coords.iter().enumerate() {
            if let Some(&j) = seen.get(p) {
                return Err(NormError::CoincidentPoints(j, i));
            }
            seen.insert(p, i);
        }
        Ok(Placement { coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, v: usize) -> &Point {
        &self.coords[v]
    }
}

/// Framework colouring: the facet class of every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub classes: BTreeMap<Edge, FacetClass>,
}

impl Coloring {
    pub fn class(&self, e: Edge) -> Option<FacetClass> {
        self.classes.get(&e).copied()
    }

    /// The monochrome edge set `G_F`.
    pub fn monochrome(&self, class: FacetClass) -> BTreeSet<Edge> {
        self.classes
            .iter()
            .filter(|(_, &c)| c == class)
            .map(|(&e, _)| e)
            .collect()
    }
}

fn check_len(graph: &Graph, p: &Placement) -> Result<(), NormError> {
    if p.len() != graph.order() {
        return Err(NormError::WrongVertexCount {
            expected: graph.order(),
            found: p.len(),
        });
    }
    Ok(())
}

/// Colours every edge by its facet class; fails on the first edge that is not
/// well-positioned.
pub fn coloring(graph: &Graph, p: &Placement, norm: &QuadNorm) -> Result<Coloring, NormError> {
    check_len(graph, p)?;
    let mut classes = BTreeMap::new();
    for &e in graph.edges() {
        let d = p.point(e.u()) - p.point(e.v());
        let c = norm
            .facet_class(&d)
            .ok_or(NormError::NotWellPositioned(e))?;
        classes.insert(e, c);
    }
    Ok(Coloring { classes })
}

/// The `|E| × 2|V|` differential of the edge-length map at `p`.
///
/// The row of edge `vw` with colour `[Fᵢ]` and `σ = sign φᵢ(p(v) − p(w))`
/// holds `σφᵢ` in the columns of `v` and `−σφᵢ` in those of `w`.
pub fn rigidity_matrix(
    graph: &Graph,
    p: &Placement,
    norm: &QuadNorm,
) -> Result<Vec<Vec<Rational>>, NormError> {
    let col = coloring(graph, p, norm)?;
    let n = graph.order();
    let mut rows = Vec::with_capacity(graph.size());
    for (&e, &c) in &col.classes {
        let (v, w) = e.ends();
        let d = p.point(v) - p.point(w);
        let phi = match c {
            FacetClass::F1 => norm.phi1(),
            FacetClass::F2 => norm.phi2(),
        };
        let sigma = if norm.eval(c, &d).is_negative() {
            rat(-1)
        } else {
            rat(1)
        };
        let mut row = alloc::vec![Rational::zero(); 2 * n];
        for k in 0..2 {
            row[2 * v + k] = &sigma * &phi[k];
            row[2 * w + k] = -&sigma * &phi[k];
        }
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsostaticReport {
    /// `|E| = 2|V| − 2` and the rigidity matrix has rank `2|V| − 2`.
    pub isostatic: bool,
    pub rank: usize,
    pub kernel_dim: usize,
    pub edge_count_ok: bool,
    /// Both monochrome edge sets are spanning trees.
    pub monochrome_trees: bool,
}

impl IsostaticReport {
    pub fn criteria_agree(&self) -> bool {
        self.isostatic == self.monochrome_trees
    }
}

/// Exact isostaticity test, with the monochrome-tree criterion reported
/// alongside the rank criterion.
pub fn is_isostatic(
    graph: &Graph,
    p: &Placement,
    norm: &QuadNorm,
) -> Result<IsostaticReport, NormError> {
    let col = coloring(graph, p, norm)?;
    let rows = rigidity_matrix(graph, p, norm)?;
    let n = graph.order();
    let r = if rows.is_empty() { 0 } else { rank(&rows) };
    let edge_count_ok = n >= 1 && graph.size() + 2 == 2 * n;
    let isostatic = edge_count_ok && r + 2 == 2 * n;
    let monochrome_trees = is_spanning_tree(n, &col.monochrome(FacetClass::F1))
        && is_spanning_tree(n, &col.monochrome(FacetClass::F2));
    Ok(IsostaticReport {
        isostatic,
        rank: r,
        kernel_dim: 2 * n - r,
        edge_count_ok,
        monochrome_trees,
    })
}
