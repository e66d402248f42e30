use super::*;
use crate::catalog;
use crate::error::Error;
use crate::expr::parse;
use crate::legendre::{Closedness, LegendreCurve, Orientation, PlaneMap};
use crate::numerics::{Interval, ZeroConfig, ZeroKind};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

fn locations(z: &[crate::numerics::Zero]) -> Vec<f64> {
    z.iter().map(|z| z.location).collect()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
    for (a, b) in got.iter().zip(want) {
        assert!((a - b).abs() < tol, "{got:?} vs {want:?}");
    }
}

fn cfg() -> ZeroConfig {
    ZeroConfig::default()
}

#[test]
fn default_witness_provenance() {
    let ellipse = catalog::ellipse(2.0, 1.0).unwrap();
    assert_eq!(
        default_witness(&ellipse.curve).unwrap().provenance,
        WitnessProvenance::Regular
    );
    let nephroid = catalog::nephroid().unwrap();
    assert_eq!(
        default_witness(&nephroid.curve).unwrap().provenance,
        WitnessProvenance::Front
    );
    let sin3 = catalog::sin3_example().unwrap();
    assert_eq!(
        default_witness(&sin3.curve).unwrap().provenance,
        WitnessProvenance::Immersion
    );
    let astroid = catalog::astroid5().unwrap();
    assert!(matches!(
        default_witness(&astroid.curve),
        Err(Error::WitnessUnavailable(_))
    ));
}

#[test]
fn involute_witness_is_minus_sin() {
    let e = catalog::involute_example().unwrap();
    let w = default_witness(&e.curve).unwrap();
    assert_eq!(w.provenance, WitnessProvenance::Frontal);
    for t in e.curve.domain().grid(100) {
        assert!((w.k1.value(t).unwrap() + t.sin()).abs() < 1e-9);
        assert_eq!(w.k2.value(t).unwrap(), 1.0);
    }
}

#[test]
fn ellipse_regular_witness_is_curvature() {
    // k2 = -ℓ/β is the ordinary curvature of the regular curve
    let (a, b) = (2.0f64, 1.0f64);
    let e = catalog::ellipse(a, b).unwrap();
    let w = default_witness(&e.curve).unwrap();
    for t in [0.0f64, 0.5, 2.0] {
        let q = a * a * t.sin().powi(2) + b * b * t.cos().powi(2);
        assert!((w.k2.value(t).unwrap() - a * b / q.powf(1.5)).abs() < 1e-12);
    }
}

#[test]
fn nephroid_vertex_function() {
    let e = catalog::nephroid().unwrap();
    let w = default_witness(&e.curve).unwrap();
    let v = vertex_function(&w);
    for t in e.curve.domain().grid(50) {
        assert!((w.k1.value(t).unwrap() - 3.0 * t.sin()).abs() < 1e-12);
        assert!((v.value(t).unwrap() - 3.0 * t.cos()).abs() < 1e-12);
    }
    let found = find_vertices(&e.curve, &w, &cfg()).unwrap();
    assert_close(&locations(&found), &[FRAC_PI_2, 3.0 * FRAC_PI_2], 1e-10);
}

#[test]
fn astroid_vertex_function_matches_display() {
    let e = catalog::astroid5().unwrap();
    let w = e.stated_witness.clone().unwrap();
    let v = vertex_function(&w);
    for t in e.curve.domain().grid(200) {
        let (c, s) = (t.cos(), t.sin());
        let p = c.powi(6) + s.powi(6);
        let want = 3.0 * (2.0 * t).cos() * p.sqrt() * (9.0 * c * c * s * s + p);
        assert!((v.value(t).unwrap() - want).abs() < 1e-10);
    }
}

#[test]
fn constant_witness_has_zero_vertex_function() {
    let d = Interval::new(0.0, 1.0);
    let one = crate::numerics::SmoothMap::constant(1.0, d);
    let w = DependencyWitness::new(one.clone(), one, WitnessProvenance::User);
    let v = vertex_function(&w);
    assert!(d.grid(10).into_iter().all(|t| v.value(t).unwrap() == 0.0));
}

#[test]
fn witness_validation_rejects_bad_pairs() {
    let e = catalog::nephroid().unwrap();
    let d = e.curve.domain();
    let one = crate::numerics::SmoothMap::constant(1.0, d);
    let bad = DependencyWitness::new(one.clone(), one.clone(), WitnessProvenance::User);
    assert!(matches!(bad.validate(&e.curve), Err(Error::WitnessInvalid(_))));
    let zero = crate::numerics::SmoothMap::constant(0.0, d);
    let vanishing = DependencyWitness::new(zero.clone(), zero, WitnessProvenance::User);
    assert!(matches!(vanishing.validate(&e.curve), Err(Error::WitnessInvalid(_))));
}

#[test]
fn sin3_events() {
    let e = catalog::sin3_example().unwrap();
    let w = default_witness(&e.curve).unwrap();
    let r = detect_events(&e.curve, &w, &cfg()).unwrap();
    assert_close(&locations(&r.vertices), &[FRAC_PI_2, 3.0 * FRAC_PI_2], 1e-9);
    let quarter: Vec<f64> = (0..4).map(|i| FRAC_PI_4 + i as f64 * FRAC_PI_2).collect();
    assert_close(&locations(&r.inflections), &quarter, 1e-9);
    let sing: Vec<f64> = r.singularities.iter().map(|s| s.zero.location).collect();
    assert_close(&sing, &[0.0, PI], 1e-9);
    assert!(r
        .singularities
        .iter()
        .all(|s| s.cusp_name().as_deref() == Some("3/2 cusp")));
}

#[test]
fn nephroid_has_no_inflections() {
    let e = catalog::nephroid().unwrap();
    assert!(find_inflections(&e.curve, &cfg()).is_empty());
    assert_close(&locations(&find_singularities(&e.curve, &cfg())), &[0.0, PI], 1e-12);
}

#[test]
fn ellipse_is_regular() {
    let e = catalog::ellipse(2.0, 1.0).unwrap();
    assert!(find_singularities(&e.curve, &cfg()).is_empty());
}

#[test]
fn straight_line_inflection_is_not_isolated() {
    let d = Interval::new(0.0, 1.0);
    let c = LegendreCurve::new(
        PlaneMap::parse("t", "2*t", d).unwrap(),
        PlaneMap::parse("-2/sqrt(5)", "1/sqrt(5)", d).unwrap(),
        Closedness::Open,
        "line",
    );
    let z = find_inflections(&c, &cfg());
    assert_eq!(z.len(), 1);
    assert!(matches!(z[0].kind, ZeroKind::NonIsolated { .. }));
}

#[test]
fn classify_catalog_cusps() {
    let neph = catalog::nephroid().unwrap();
    let t = classify_point(&neph.curve, 0.0, DEFAULT_MAX_ORDER).unwrap();
    assert_eq!((t.n, t.m), (2, 3));
    assert_eq!(t.cusp_name().unwrap(), "3/2 cusp");
    let astroid = catalog::astroid5().unwrap();
    let t = classify_point(&astroid.curve, 0.0, DEFAULT_MAX_ORDER).unwrap();
    assert_eq!(t.cusp_name().unwrap(), "5/2 cusp");
    let par = catalog::ellipse_parallel(2.0, 1.0, 0.5).unwrap();
    let t = classify_point(&par.curve, 0.0, DEFAULT_MAX_ORDER).unwrap();
    assert_eq!(t.cusp_name().unwrap(), "4/3 cusp");
    assert!(t.degenerates_beyond_ordinary_cusp());
}

#[test]
fn classify_regular_point() {
    let e = catalog::ellipse(2.0, 1.0).unwrap();
    let t = classify_point(&e.curve, 0.4, DEFAULT_MAX_ORDER).unwrap();
    assert_eq!((t.n, t.m), (1, 2));
    assert!(t.cusp_name().is_none());
}

#[test]
fn classify_respects_order_bound() {
    let f = parse("1").unwrap();
    let c = germ_curve(4, 9, &f, Orientation::Plus).unwrap();
    assert!(classify_point(&c, 0.0, DEFAULT_MAX_ORDER).is_none());
    assert_eq!(classify_point(&c, 0.0, 10), Some(NMType { n: 4, m: 9 }));
}

#[test]
fn germ_examples() {
    let one = parse("1").unwrap();
    let reg = germ_curve(1, 2, &one, Orientation::Plus).unwrap();
    assert!((reg.curvature_pair().beta.value(0.0).unwrap() + 1.0).abs() < 1e-15);
    let cusp = germ_curve(2, 3, &one, Orientation::Plus).unwrap();
    assert_eq!(classify_point(&cusp, 0.0, 7), Some(NMType { n: 2, m: 3 }));
    assert!(cusp.curvature_pair().ell.value(0.0).unwrap().abs() > 0.1);
    let frontal = germ_curve(3, 5, &one, Orientation::Plus).unwrap();
    let c = frontal.curvature_pair();
    assert_eq!((c.ell.value(0.0).unwrap(), c.beta.value(0.0).unwrap()), (0.0, 0.0));
    let zero_f = parse("t").unwrap();
    assert!(matches!(
        germ_curve(2, 3, &zero_f, Orientation::Plus),
        Err(Error::InvalidParameter(_))
    ));
    assert!(germ_curve(3, 3, &one, Orientation::Plus).is_err());
}

#[test]
fn germ_alpha_cases() {
    let one = parse("1").unwrap();
    let shifted = parse("1 + t").unwrap();
    // n = k with ḟ(0) = 0
    let (a0, a1) = germ_alpha(2, 4, &one, Orientation::Plus).unwrap().at_origin().unwrap();
    assert!(a0.abs() > 0.1 && a1.abs() < 1e-12);
    let (_, a1) = germ_alpha(2, 4, &shifted, Orientation::Plus)
        .unwrap()
        .at_origin()
        .unwrap();
    assert!(a1.abs() > 0.1);
    // n = k + 1
    let g = germ_alpha(3, 5, &one, Orientation::Minus).unwrap();
    assert_eq!(g.direction, AlphaDirection::BetaOverEll);
    let (a0, a1) = g.at_origin().unwrap();
    assert!(a0.abs() < 1e-12 && a1.abs() > 0.1);
    // n + 2 <= k
    let g = germ_alpha(2, 7, &one, Orientation::Plus).unwrap();
    assert_eq!(g.direction, AlphaDirection::EllOverBeta);
    let (a0, a1) = g.at_origin().unwrap();
    assert!(a0.abs() < 1e-12 && a1.abs() < 1e-12);
}

#[test]
fn germ_alpha_factors_curvature() {
    for (n, m) in [(2, 3), (2, 4), (3, 4), (2, 5), (2, 7), (3, 8)] {
        for f in ["1", "1 + t", "2 - t^2"] {
            let f = parse(f).unwrap();
            let c = germ_curvature(n, m, &f, Orientation::Plus).unwrap();
            let g = germ_alpha(n, m, &f, Orientation::Plus).unwrap();
            for t in Interval::new(-0.4, 0.4).grid(40) {
                let (l, b, a) = (
                    c.ell.value(t).unwrap(),
                    c.beta.value(t).unwrap(),
                    g.alpha.value(t).unwrap(),
                );
                let r = match g.direction {
                    AlphaDirection::BetaOverEll => b - a * l,
                    AlphaDirection::EllOverBeta => l - a * b,
                };
                assert!(r.abs() < 1e-12, "({n},{m}) at {t}: {r}");
            }
        }
    }
}

#[test]
fn witnesses_agree_on_vertices() {
    for e in [
        catalog::ellipse(2.0, 1.0).unwrap(),
        catalog::ellipse(3.0, 1.0).unwrap(),
        catalog::nephroid().unwrap(),
    ] {
        let all = applicable_witnesses(&e.curve);
        assert!(all.len() >= 2, "{}", e.name);
        let first = locations(&find_vertices(&e.curve, &all[0], &cfg()).unwrap());
        for w in &all[1..] {
            assert_close(&locations(&find_vertices(&e.curve, w, &cfg()).unwrap()), &first, 1e-8);
        }
    }
}

#[test]
fn vertex_function_scales_quadratically() {
    let e = catalog::nephroid().unwrap();
    let w = default_witness(&e.curve).unwrap();
    let v = vertex_function(&w);
    let base = locations(&find_vertices(&e.curve, &w, &cfg()).unwrap());
    for c in [1e3, 1e-3] {
        let s = w.scaled(c);
        let vs = vertex_function(&s);
        for t in [0.2, 1.0, 3.0] {
            let want = c * c * v.value(t).unwrap();
            assert!((vs.value(t).unwrap() - want).abs() <= 1e-12 * want.abs().max(1e-300) + 1e-300);
        }
        assert_close(&locations(&find_vertices(&e.curve, &s, &cfg()).unwrap()), &base, 1e-12);
    }
}

#[test]
fn witness_transforms_stay_valid() {
    let e = catalog::ellipse(2.0, 1.0).unwrap();
    let w = default_witness(&e.curve).unwrap();
    let flipped = e.curve.flip_normal();
    w.flip_normal().validate(&flipped).unwrap();
    w.parallel(0.3).validate(&e.curve.parallel(0.3)).unwrap();
    let sw = e.curve.push_forward(&crate::legendre::PlaneDiffeo::Swap).unwrap();
    w.swap().validate(&sw).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn classify_germs(idx in 0usize..5, fi in 0usize..3, plus in any::<bool>()) {
        let (n, m) = [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5)][idx];
        let f = parse(["1", "1 + t", "2 - t^2"][fi]).unwrap();
        let sign = if plus { Orientation::Plus } else { Orientation::Minus };
        let c = germ_curve(n, m, &f, sign).unwrap();
        prop_assert_eq!(classify_point(&c, 0.0, DEFAULT_MAX_ORDER), Some(NMType { n, m }));
    }

    #[test]
    fn singularities_have_vanishing_beta(t0 in 0.0f64..TAU) {
        let e = catalog::astroid5().unwrap();
        let s = find_singularities(&e.curve, &cfg());
        let beta = e.curve.curvature_pair().beta;
        for z in &s {
            prop_assert!(beta.value(z.location).unwrap().abs() < 1e-10);
        }
        // any other point of the grid is regular or near a listed one
        let b = beta.value(t0).unwrap().abs();
        let near = s.iter().any(|z| (z.location - t0).abs() < 1e-3 || (z.location - t0).abs() > TAU - 1e-3);
        prop_assert!(b > 1e-8 || near);
    }
}
