use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use super::*;
use crate::catalog::{closed_entries, ellipse, germ, involute_example, nephroid};
use crate::events::DependencyWitness;
use crate::legendre::{Closedness, LegendreCurve, Orientation, PlaneDiffeo, PlaneMap};
use crate::numerics::Interval;

fn figure_eight() -> LegendreCurve {
    let g = PlaneMap::parse("sin(t)", "sin(2*t)", Interval::new(0.0, TAU)).unwrap();
    LegendreCurve::from_regular(g, Orientation::Plus, Closedness::Closed(1), "figure eight").unwrap()
}

#[test]
fn simplicity_matches_ground_truth() {
    for e in closed_entries() {
        let r = is_simple_closed(&e.curve, SIMPLE_RESOLUTION).unwrap();
        if let Some(simple) = e.truth.simple {
            assert_eq!(r.simple, simple, "{}", e.name);
        }
        assert_eq!(r.crossing.is_some(), !r.simple);
    }
}

#[test]
fn figure_eight_crosses_at_origin() {
    let r = is_simple_closed(&figure_eight(), SIMPLE_RESOLUTION).unwrap();
    assert!(!r.simple);
    let c = r.crossing.unwrap();
    assert!(c.point[0].hypot(c.point[1]) < 1e-3, "{c:?}");
    assert!((c.t - c.s - PI).abs() < 1e-2, "{c:?}");
}

#[test]
fn open_curves_are_rejected() {
    let g = germ(2, 3, &crate::expr::Expr::c(1.0), Orientation::Plus).unwrap().curve;
    assert!(matches!(is_simple_closed(&g, 64), Err(crate::Error::Hypothesis(_))));
    let w = crate::events::default_witness(&g).unwrap();
    assert!(four_vertex_verdict(&g, &w).is_err());
    assert!(verify_invariance(&g, &w, &InvarianceConfig::default()).is_err());
}

#[test]
fn convexity_cases_permute_under_flips() {
    let e = ellipse(2.0, 1.0).unwrap().curve;
    let base = convexity(&e).unwrap();
    assert!(base.convex);
    assert_eq!(base.case, ConvexCase::II);
    assert!(base.min_ell > 0.0 && base.max_beta < 0.0);
    assert_eq!(convexity(&e.flip_normal()).unwrap().case, ConvexCase::I);
    let swapped = e.push_forward(&PlaneDiffeo::Swap).unwrap();
    assert_eq!(convexity(&swapped).unwrap().case, ConvexCase::III);
    assert_eq!(convexity(&swapped.flip_normal()).unwrap().case, ConvexCase::IV);
}

#[test]
fn convexity_needs_a_simple_curve() {
    let inv = involute_example().unwrap().curve;
    assert!(matches!(convexity(&inv), Err(crate::Error::Hypothesis(_))));
    let n = nephroid().unwrap().curve;
    let v = convexity(&n).unwrap();
    assert!(!v.convex);
    assert_eq!(v.case, ConvexCase::None);
}

#[test]
fn catalog_zeros_are_isolated() {
    for e in closed_entries() {
        assert!(zeros_isolated(&e.curve).unwrap(), "{}", e.name);
    }
}

#[test]
fn verdicts_on_the_catalog() {
    let expect: &[(&str, &[Clause], usize)] = &[
        ("ellipse", &[Clause::ConvexFrontal], 4),
        ("nephroid", &[], 2),
        ("convex_frontal_example", &[Clause::ConvexFrontal], 4),
        ("involute_example", &[], 2),
        ("astroid5", &[Clause::SingularTypes], 4),
        ("sin3_example", &[], 2),
    ];
    for e in closed_entries() {
        let v = four_vertex_verdict(&e.curve, &e.witness().unwrap()).unwrap();
        assert!(v.consistent, "{}", e.name);
        assert_eq!(v.fired.len(), v.reasons.len());
        if e.name == "ellipse_parallel" {
            assert!(v.fired.contains(&Clause::FrontSingularPoints));
            assert_eq!(v.measured, 4);
            continue;
        }
        let (_, fired, measured) = expect.iter().find(|x| x.0 == e.name).unwrap();
        assert_eq!(v.fired, *fired, "{}", e.name);
        assert_eq!(v.measured, *measured, "{}", e.name);
        assert_eq!(v.predicted, if fired.is_empty() { 0 } else { 4 });
    }
}

#[test]
fn invariance_holds_on_the_ellipse() {
    let e = ellipse(2.0, 1.0).unwrap();
    let cfg = InvarianceConfig {
        affine_maps: 3,
        linear_maps: 2,
        ..Default::default()
    };
    let r = verify_invariance(&e.curve, &e.witness().unwrap(), &cfg).unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    // 3 affine, swap, flip, 5 parallels, reparametrization, 2 shears, 2 linear
    assert_eq!(r.checks.len(), 15);
    let gates: Vec<f64> = r.checks.iter().filter_map(|c| c.gate_error).collect();
    assert_eq!(gates.len(), 4);
    assert!(gates.iter().all(|g| *g < 1e-9));
}

#[test]
fn a_wrong_witness_is_caught() {
    // a witness for a different ellipse puts the vertices elsewhere
    let e = ellipse(2.0, 1.0).unwrap();
    let other = ellipse(3.0, 1.0).unwrap().witness().unwrap();
    let w = DependencyWitness::new(
        other.k1.compose(&shifted(e.curve.domain())),
        other.k2.compose(&shifted(e.curve.domain())),
        other.provenance,
    );
    let cfg = InvarianceConfig {
        affine_maps: 0,
        parallels: vec![0.3],
        shears: vec![],
        linear_maps: 0,
        reparametrize: false,
        ..Default::default()
    };
    let r = verify_invariance(&e.curve, &w, &cfg).unwrap();
    assert!(!r.passed());
}

fn shifted(d: Interval) -> crate::numerics::SmoothMap {
    crate::numerics::SmoothMap::identity(d).add_scalar(0.3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn simplicity_is_affine_invariant(
        m in prop::array::uniform4(-2.0f64..2.0),
        shift in prop::array::uniform2(-1.0f64..1.0),
    ) {
        let det = m[0] * m[3] - m[1] * m[2];
        prop_assume!(det.abs() > 0.3);
        let a = [[m[0], m[1]], [m[2], m[3]]];
        for c in [ellipse(2.0, 1.0).unwrap().curve, figure_eight()] {
            let before = is_simple_closed(&c, 2048).unwrap().simple;
            let image = c.push_forward(&PlaneDiffeo::Affine { a, shift }).unwrap();
            prop_assert_eq!(is_simple_closed(&image, 2048).unwrap().simple, before);
        }
    }
}
