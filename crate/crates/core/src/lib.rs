//! Symmetric isostatic bar-joint frameworks in the plane under norms whose
//! unit ball is a parallelogram (the ℓ¹ and ℓ∞ norms being the standard
//! examples).
//!
//! The crate decides whether a finite simple graph with a ℤ₂ or ℤ₄ action
//! admits a symmetric isostatic placement, builds such placements with exact
//! rational coordinates, and certifies them by an exact rank computation.
//!
//! * [`graph`]: graphs, group actions, orbits and symmetric neighbourhoods.
//! * [`treepack`]: symmetric spanning-tree packings and admissibility.
//! * [`construct`]: extension moves, reductions and construction chains.
//! * [`polynorm`]: quadrilateral norms, colourings, isometries, rigidity matrix.
//! * [`placement`]: constructive placement synthesis.
//! * [`verify`]: brute-force oracles, enumeration and experiments.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod construct;
pub mod graph;
pub mod linalg;
pub mod placement;
pub mod polynorm;
pub mod treepack;
pub mod unionfind;
pub mod verify;

pub use construct::{ConstructError, ConstructionChain, ExtensionMove, MoveKind};
pub use graph::{Edge, Graph, GroupCase, OrbitPartition, SymError, SymmetricGraph};
pub use placement::{Method, PlacementError, SymmetricPlacement};
pub use polynorm::{
    Coloring, FacetClass, IsometryClass, IsostaticReport, LinearIsometry, NormError, Placement,
    Point, QuadNorm, Rational,
};
pub use treepack::{AdmissibilityReport, FailureReason, TreeMode, TreePair};
pub use verify::{ExperimentReport, VerifyError};
