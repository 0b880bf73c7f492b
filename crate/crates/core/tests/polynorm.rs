mod common;

use common::*;
use proptest::prelude::*;
use symiso_core::linalg::{
    feasible_point, fourier_motzkin_feasible, frac, rank, rank_rational, rat, Rational,
};
use symiso_core::placement::place_w5;
use symiso_core::polynorm::{coloring, is_isostatic, rigidity_matrix};
use symiso_core::{FacetClass, GroupCase, IsometryClass, NormError, Placement, Point, QuadNorm};

fn p(x: i64, y: i64) -> Point {
    Point::int(x, y)
}

#[test]
fn norm_construction() {
    let linf = QuadNorm::linf();
    let mut ext = linf.extreme_points().to_vec();
    ext.sort();
    let mut square = vec![p(1, 1), p(1, -1), p(-1, 1), p(-1, -1)];
    square.sort();
    assert_eq!(ext, square);
    let l1 = QuadNorm::new([frac(1, 2), frac(1, 2)], [frac(1, 2), frac(-1, 2)]).unwrap();
    assert_eq!(l1, QuadNorm::l1());
    assert_eq!(
        QuadNorm::new([rat(1), rat(0)], [rat(2), rat(0)]),
        Err(NormError::DegenerateBall)
    );
}

#[test]
fn norm_values() {
    let linf = QuadNorm::linf();
    assert_eq!(linf.norm_value(&p(3, 1)), rat(3));
    assert_eq!(linf.norm_value(&Point::origin()), rat(0));
    assert_eq!(QuadNorm::l1().norm_value(&Point::origin()), rat(0));
    // the functionals define the ball; nothing is rescaled
    assert_eq!(QuadNorm::l1().norm_value(&p(1, 2)), frac(3, 2));
}

#[test]
fn facet_classes() {
    let linf = QuadNorm::linf();
    assert_eq!(linf.facet_class(&p(3, 1)), Some(FacetClass::F1));
    assert_eq!(linf.facet_class(&p(2, 2)), None);
    let x = p(3, 1);
    for k in [rat(2), rat(-1), frac(1, 3)] {
        assert_eq!(linf.facet_class(&x.scale(&k)), Some(FacetClass::F1));
    }
}

#[test]
fn edge_colours() {
    let k2 = graph(2, "01");
    let linf = QuadNorm::linf();
    let c = coloring(&k2, &Placement::new(vec![p(0, 0), p(1, 0)]).unwrap(), &linf).unwrap();
    assert_eq!(c.class(symiso_core::Edge::new(0, 1)), Some(FacetClass::F1));
    assert!(matches!(
        coloring(&k2, &Placement::new(vec![p(0, 0), p(1, 1)]).unwrap(), &linf),
        Err(NormError::NotWellPositioned(_))
    ));
    assert!(matches!(
        Placement::new(vec![p(0, 0), p(0, 0)]),
        Err(NormError::CoincidentPoints(0, 1))
    ));
}

#[test]
fn isometry_groups() {
    let linf = QuadNorm::linf();
    let isos = linf.isometries();
    assert_eq!(isos.len(), 8);
    let find = |m: [[i64; 2]; 2]| {
        let m = m.map(|r| r.map(rat));
        isos.iter().find(|i| i.matrix == m).unwrap().class
    };
    assert_eq!(find([[1, 0], [0, -1]]), IsometryClass::ReflectionPreserving);
    assert_eq!(find([[0, 1], [1, 0]]), IsometryClass::ReflectionSwapping);
    assert_eq!(find([[0, -1], [1, 0]]), IsometryClass::QuarterTurn);
    assert_eq!(find([[-1, 0], [0, -1]]), IsometryClass::HalfTurn);
    let generic = QuadNorm::new([rat(1), rat(0)], [rat(1), rat(1)]).unwrap();
    assert!(generic.isometries_of(IsometryClass::QuarterTurn).is_empty());
    assert!(generic
        .isometries()
        .iter()
        .all(|i| i.class != IsometryClass::QuarterTurn));
    assert_eq!(QuadNorm::l1().isometries().len(), 8);
}

#[test]
fn rigidity_rows() {
    let k2 = graph(2, "01");
    let pl = Placement::new(vec![p(0, 0), p(1, 0)]).unwrap();
    let rows = rigidity_matrix(&k2, &pl, &QuadNorm::linf()).unwrap();
    // the edge is stored as v = 0, w = 1 and p(0) − p(1) points along −x
    assert_eq!(rows.len(), 1);
    let flat: Vec<Rational> = rows[0].clone();
    let expected: Vec<Rational> = [-1, 0, 1, 0].into_iter().map(rat).collect();
    assert_eq!(flat, expected);
    let r = is_isostatic(&k2, &pl, &QuadNorm::linf()).unwrap();
    assert!(!r.isostatic);
    assert_eq!(r.kernel_dim, 3);
}

#[test]
fn wheel_placement_is_isostatic() {
    for norm in [QuadNorm::linf(), QuadNorm::l1()] {
        for class in [IsometryClass::ReflectionPreserving, IsometryClass::HalfTurn] {
            let tau = norm.isometries_of(class).remove(0);
            let sp = place_w5(&norm, &tau).unwrap();
            assert_eq!(sp.report.rank, 8);
            assert!(sp.report.isostatic && sp.report.criteria_agree());
            let w = w5(GroupCase::CsPreserving);
            let c = coloring(w.graph(), &sp.placement, &norm).unwrap();
            assert_eq!(c.monochrome(FacetClass::F1).len(), 4);
        }
    }
}

#[test]
fn simplex_matches_fourier_motzkin() {
    // x ≥ 1, y ≥ 1, x + y ≤ 3 is feasible; x + y ≤ 1 is not
    let rows = vec![
        vec![rat(1), rat(0)],
        vec![rat(0), rat(1)],
        vec![rat(-1), rat(-1)],
    ];
    for (bound, ok) in [(3, true), (1, false)] {
        let b = vec![rat(1), rat(1), rat(-bound)];
        assert_eq!(feasible_point(&rows, &b).is_some(), ok);
        assert_eq!(fourier_motzkin_feasible(&rows, &b), ok);
    }
}

fn small() -> impl Strategy<Value = i64> {
    -6i64..=6
}

proptest! {
    #[test]
    fn class_is_scale_and_sign_free(x in small(), y in small(), k in 1i64..5, d in 1i64..5, neg in any::<bool>()) {
        let norm = QuadNorm::l1();
        let v = p(x, y);
        let lambda = if neg { frac(-k, d) } else { frac(k, d) };
        prop_assert_eq!(norm.facet_class(&v), norm.facet_class(&v.scale(&lambda)));
    }

    #[test]
    fn isometries_preserve_the_norm(x in small(), y in small()) {
        for norm in [QuadNorm::linf(), QuadNorm::l1(), QuadNorm::new([rat(1), rat(0)], [rat(1), rat(1)]).unwrap()] {
            for t in norm.isometries() {
                let v = p(x, y);
                prop_assert_eq!(norm.norm_value(&t.apply(&v)), norm.norm_value(&v));
                let c = norm.facet_class(&v);
                let c2 = norm.facet_class(&t.apply(&v));
                let expect = if t.preserves_facets() { c } else { c.map(FacetClass::opposite) };
                prop_assert_eq!(c2, expect);
            }
        }
    }

    #[test]
    fn rank_agrees_on_random_matrices(entries in prop::collection::vec(-3i64..=3, 12)) {
        let rows: Vec<Vec<Rational>> = entries.chunks(4).map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        prop_assert_eq!(rank(&rows), rank_rational(&rows));
    }
}
