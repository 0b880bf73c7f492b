mod common;

use common::*;
use proptest::prelude::*;
use symiso_core::construct::{apply_move, w5_base};
use symiso_core::linalg::rat;
use symiso_core::placement::{
    extend_placement, place_w5, placement_from_trees, synthesize, verify_placement,
};
use symiso_core::treepack::{check_admissible, TreeMode};
use symiso_core::{
    Edge, ExtensionMove, FacetClass, GroupCase, IsometryClass, Method, MoveKind, PlacementError,
    QuadNorm, SymmetricGraph, SymmetricPlacement, TreePair,
};

fn certified(sg: &SymmetricGraph, sp: &SymmetricPlacement) {
    let n = sg.graph().order();
    assert_eq!(sp.report.rank, 2 * n - 2);
    assert!(sp.report.isostatic && sp.report.monochrome_trees);
    for v in sg.graph().vertices() {
        assert_eq!(
            sp.tau.apply(sp.placement.point(v)),
            *sp.placement.point(sg.image(v, 1))
        );
    }
    sp.pair.validate(sg).unwrap();
}

#[test]
fn sample_placements() {
    for norm in [QuadNorm::linf(), QuadNorm::l1()] {
        for (sg, method) in [
            (wheel_mirror(), Method::Chain),
            (swap6(), Method::TreeProgram),
            (halfturn7(), Method::Chain),
            (hat6(), Method::HatGraph),
            (k4_c2(), Method::HatGraph),
            (w5(GroupCase::C2), Method::Chain),
        ] {
            let sp = synthesize(&sg, &norm).unwrap();
            certified(&sg, &sp);
            assert_eq!(sp.method, method);
            let again = verify_placement(&sg, &sp.placement, &sp.tau, &norm).unwrap();
            assert_eq!(again.report, sp.report);
        }
        let d = quarter8();
        let sp = synthesize(&d, &norm).unwrap();
        certified(&d, &sp);
        assert_eq!(sp.tau.class, IsometryClass::QuarterTurn);
        for v in d.graph().vertices() {
            assert_eq!(
                sp.tau.apply_power(sp.placement.point(v), 4),
                *sp.placement.point(v)
            );
        }
    }
}

#[test]
fn isometry_classes_match_cases() {
    let norm = QuadNorm::linf();
    for (sg, class) in [
        (wheel_mirror(), IsometryClass::ReflectionPreserving),
        (swap6(), IsometryClass::ReflectionSwapping),
        (halfturn7(), IsometryClass::HalfTurn),
    ] {
        assert_eq!(synthesize(&sg, &norm).unwrap().tau.class, class);
    }
}

#[test]
fn generic_parallelogram_has_no_quarter_turn() {
    let generic = QuadNorm::new([rat(1), rat(0)], [rat(1), rat(1)]).unwrap();
    assert!(matches!(
        synthesize(&quarter8(), &generic),
        Err(PlacementError::NoSwappingIsometry)
    ));
}

#[test]
fn non_admissible_is_refused() {
    let k4 = sym(4, "01 02 03 12 13 23", GroupCase::C2, &[1, 0, 2, 3]);
    assert!(matches!(
        synthesize(&k4, &QuadNorm::linf()),
        Err(PlacementError::NotAdmissible(_))
    ));
}

#[test]
fn wheel_pair_from_trees() {
    let norm = QuadNorm::linf();
    let w = w5(GroupCase::CsPreserving);
    let pair = TreePair {
        tree1: edge_set("23 30 01 14"),
        tree2: edge_set("12 20 04 43"),
        mode: TreeMode::Invariant,
    };
    let tau = norm
        .isometries_of(IsometryClass::ReflectionPreserving)
        .remove(0);
    let sp = placement_from_trees(&w, &pair, &norm, &tau).unwrap();
    certified(&w, &sp);
    assert_eq!(sp.coloring.monochrome(FacetClass::F1), pair.tree1);
    assert_eq!(sp.coloring.monochrome(FacetClass::F2), pair.tree2);
}

#[test]
fn swapped_pair_from_trees() {
    let norm = QuadNorm::linf();
    let b = swap6();
    let pair = check_admissible(&b).tree_pair.unwrap();
    let tau = norm
        .isometries_of(IsometryClass::ReflectionSwapping)
        .remove(0);
    let sp = placement_from_trees(&b, &pair, &norm, &tau)
        .or_else(|| placement_from_trees(&b, &pair.swap(), &norm, &tau))
        .unwrap();
    certified(&b, &sp);
}

#[test]
fn single_edge_is_not_isostatic() {
    // A lone bar keeps a three-dimensional flex space, so nothing is certified.
    let norm = QuadNorm::linf();
    let k2 = SymmetricGraph::identity(graph(2, "01"), GroupCase::C2);
    let pair = TreePair {
        tree1: edge_set("01"),
        tree2: Default::default(),
        mode: TreeMode::Invariant,
    };
    let id = norm.isometries_of(IsometryClass::Identity).remove(0);
    assert!(placement_from_trees(&k2, &pair, &norm, &id).is_none());
}

#[test]
fn zero_extension_colours() {
    let norm = QuadNorm::linf();
    let (w, _) = w5_base();
    let tau = norm
        .isometries_of(IsometryClass::ReflectionPreserving)
        .remove(0);
    let pw = place_w5(&norm, &tau).unwrap();
    let mv = ExtensionMove::appended(MoveKind::ZeroExt { v1: 1, v2: 2 }, 5);
    let sp = extend_placement(&w, &pw, &mv, &norm).unwrap();
    let g = apply_move(&w, &mv).unwrap();
    certified(&g, &sp);
    let c1 = sp.coloring.class(Edge::new(5, 1)).unwrap();
    let c2 = sp.coloring.class(Edge::new(5, 2)).unwrap();
    assert_ne!(c1, c2);
}

fn random_kind(h: &SymmetricGraph, pick: &[usize]) -> MoveKind {
    let n = h.graph().order();
    let edges: Vec<Edge> = h.graph().edges().iter().copied().collect();
    let e = edges[pick[3] % edges.len()];
    match pick[0] % 3 {
        0 => MoveKind::ZeroExt {
            v1: pick[1] % n,
            v2: pick[2] % n,
        },
        1 => MoveKind::OneExt {
            v1: e.u(),
            v2: e.v(),
            v3: pick[1] % n,
            removed: e,
        },
        _ => MoveKind::ModifiedOneExt {
            v1: e.u(),
            v2: h.s(e.v()),
            v3: pick[1] % n,
            removed: e,
        },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn extensions_stay_isostatic(picks in prop::collection::vec(prop::collection::vec(0usize..64, 4), 1..4), half in any::<bool>(), l1 in any::<bool>()) {
        let norm = if l1 { QuadNorm::l1() } else { QuadNorm::linf() };
        let (mut g, _) = w5_base();
        let class = if half {
            g = g.with_case(GroupCase::C2).unwrap();
            IsometryClass::HalfTurn
        } else {
            IsometryClass::ReflectionPreserving
        };
        let tau = norm.isometries_of(class).remove(0);
        let mut sp = place_w5(&norm, &tau).unwrap();
        for p in &picks {
            let mv = ExtensionMove::appended(random_kind(&g, p), g.graph().order());
            let Ok(next) = apply_move(&g, &mv) else { continue };
            sp = extend_placement(&g, &sp, &mv, &norm).unwrap();
            g = next;
            prop_assert_eq!(sp.report.rank, 2 * g.graph().order() - 2);
        }
        certified(&g, &sp);
    }
}
