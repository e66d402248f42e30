use super::*;
use crate::catalog;
use crate::events::{default_witness, find_vertices, vertex_function};
use crate::legendre::Orientation;
use crate::numerics::{find_zeros, Interval, ZeroConfig};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_4, PI, TAU};

fn sup_dist(a: &EvoluteCurve, b: impl Fn(f64) -> [f64; 2], d: Interval, n: usize) -> f64 {
    d.grid(n)
        .into_iter()
        .map(|t| {
            let p = a.value(t).unwrap();
            let q = b(t);
            (p[0] - q[0]).hypot(p[1] - q[1])
        })
        .fold(0.0, f64::max)
}

#[test]
fn nephroid_front_evolute() {
    let e = catalog::nephroid().unwrap();
    let ev = evolute_front(&e.curve).unwrap();
    assert_eq!(ev.source, EvoluteSource::Front);
    let err = sup_dist(
        &ev,
        |t| [2.0 * t.cos().powi(3), 3.0 * t.sin() - 2.0 * t.sin().powi(3)],
        e.curve.domain(),
        500,
    );
    assert!(err < 1e-12, "{err}");
}

#[test]
fn ellipse_front_evolute() {
    let (a, b) = (3.0, 1.5);
    let e = catalog::ellipse(a, b).unwrap();
    let ev = evolute_front(&e.curve).unwrap();
    let c = a * a - b * b;
    let err = sup_dist(
        &ev,
        |t| [c / a * t.cos().powi(3), -c / b * t.sin().powi(3)],
        e.curve.domain(),
        500,
    );
    assert!(err < 1e-12, "{err}");
}

#[test]
fn circle_evolute_is_center() {
    let d = Interval::new(0.0, TAU);
    let g = PlaneMap::parse("1 + 2*cos(t)", "-1 + 2*sin(t)", d).unwrap();
    let c = LegendreCurve::from_regular(g, Orientation::Minus, Closedness::Closed(2), "circle").unwrap();
    let ev = evolute_front(&c).unwrap();
    assert!(sup_dist(&ev, |_| [1.0, -1.0], d, 100) < 1e-13);
}

#[test]
fn involute_alpha_is_sin() {
    let e = catalog::involute_example().unwrap();
    let r = resolve_alpha(&e.curve);
    assert!(r.is_resolved(), "{:?}", r.status);
    let alpha = r.alpha.unwrap();
    let err = e
        .curve
        .domain()
        .grid(1000)
        .into_iter()
        .map(|t| (alpha.value(t).unwrap() - t.sin()).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-9, "{err}");
    // the quotient stays smooth across the shared zeros at π/2, 3π/2
    for t in [PI / 2.0, 1.5 * PI] {
        assert!((alpha.deriv(1, t).unwrap() - t.cos()).abs() < 1e-8);
    }
}

#[test]
fn involute_front_evolute_rejected() {
    let e = catalog::involute_example().unwrap();
    assert!(matches!(evolute_front(&e.curve), Err(Error::Inflection(_))));
    let ev = evolute_frontal(&e.curve).unwrap();
    let err = sup_dist(&ev, |t| [-t.sin().sin(), t.sin().cos() - 1.0], e.curve.domain(), 500);
    assert!(err < 1e-8, "{err}");
}

#[test]
fn convex_frontal_alpha_closed_form() {
    let e = catalog::convex_frontal_example().unwrap();
    let r = resolve_alpha(&e.curve);
    assert!(r.is_resolved(), "{:?}", r.status);
    let alpha = r.alpha.unwrap();
    let truth = e.truth.alpha.unwrap();
    let err = e
        .curve
        .domain()
        .grid(500)
        .into_iter()
        .map(|t| (alpha.value(t).unwrap() - truth.value(t).unwrap()).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-8, "{err}");
}

#[test]
fn sin3_alpha_fails_at_inflection() {
    let e = catalog::sin3_example().unwrap();
    let r = resolve_alpha(&e.curve);
    match r.status {
        RatioStatus::Failed { t0, .. } => {
            let k = (t0 / FRAC_PI_4).round();
            assert!((t0 - k * FRAC_PI_4).abs() < 1e-6 && k as i64 % 2 == 1, "{t0}");
        }
        RatioStatus::Resolved => panic!("α should not exist"),
    }
    assert!(matches!(evolute_frontal(&e.curve), Err(Error::AlphaUnresolved { .. })));
}

#[test]
fn astroid5_dual_alpha_exists() {
    let e = catalog::astroid5().unwrap();
    assert!(!resolve_alpha(&e.curve).is_resolved());
    let r = resolve_dual_alpha(&e.curve);
    assert!(r.is_resolved(), "{:?}", r.status);
    // ℓ/β = 3 cos t sin t / (cos⁶t + sin⁶t)^{3/2}
    let q = r.alpha.unwrap();
    for t in [0.0, 0.3, 1.2, PI / 2.0, 4.0] {
        let (c, s) = (f64::cos(t), f64::sin(t));
        let want = 3.0 * c * s / (c.powi(6) + s.powi(6)).powf(1.5);
        assert!((q.value(t).unwrap() - want).abs() < 1e-8);
    }
}

#[test]
fn front_and_frontal_evolutes_agree() {
    let e = catalog::ellipse(2.0, 1.0).unwrap();
    let a = evolute_front(&e.curve).unwrap();
    let b = evolute_frontal(&e.curve).unwrap();
    let err = sup_dist(&a, |t| b.value(t).unwrap(), e.curve.domain(), 300);
    assert!(err < 1e-12, "{err}");
}

#[test]
fn parallel_zero_is_identity() {
    let e = catalog::nephroid().unwrap();
    let p = parallel(&e.curve, 0.0);
    for t in [0.0, 1.0, 2.5] {
        assert_eq!(p.gamma.value(t).unwrap(), e.curve.gamma.value(t).unwrap());
    }
}

#[test]
fn nephroid_parallel_curvature() {
    let e = catalog::nephroid().unwrap();
    let c = parallel(&e.curve, 3.0).curvature_pair();
    for t in [0.0, 0.4, 2.0, 5.0] {
        assert!((c.ell.value(t).unwrap() - 2.0).abs() < 1e-12);
        assert!((c.beta.value(t).unwrap() - (6.0 - 6.0 * t.sin())).abs() < 1e-12);
    }
}

#[test]
fn curvature_curve_of_nephroid() {
    let e = catalog::nephroid().unwrap();
    let w = default_witness(&e.curve).unwrap();
    let cc = curvature_curve(&e.curve, &w).unwrap();
    let c = cc.curve.curvature_pair();
    let base = e.curve.curvature_pair();
    for t in e.curve.domain().grid(200) {
        let (k1, k2) = (w.k1.value(t).unwrap(), w.k2.value(t).unwrap());
        let (d1, d2) = (w.k1.deriv(1, t).unwrap(), w.k2.deriv(1, t).unwrap());
        let theta_dot = -(d1 * k2 - k1 * d2) / (k1 * k1 + k2 * k2);
        assert!((cc.theta.deriv(1, t).unwrap() - theta_dot).abs() < 1e-10);
        assert!((c.ell.value(t).unwrap() - theta_dot).abs() < 1e-8);
        let th = cc.theta.value(t).unwrap();
        let beta_c = -base.ell.value(t).unwrap() * th.sin() + base.beta.value(t).unwrap() * th.cos();
        assert!((c.beta.value(t).unwrap() - beta_c).abs() < 1e-8);
    }
    let inflections = find_zeros(&c.ell, &ZeroConfig::periodic(true));
    let vertices = find_vertices(&e.curve, &w, &ZeroConfig::default()).unwrap();
    assert_eq!(inflections.len(), vertices.len());
    for (a, b) in inflections.iter().zip(&vertices) {
        assert!((a.location - b.location).abs() < 1e-8);
    }
}

#[test]
fn curvature_curve_theta_is_continuous() {
    let e = catalog::ellipse(2.0, 1.0).unwrap();
    let w = default_witness(&e.curve).unwrap();
    let cc = curvature_curve(&e.curve, &w).unwrap();
    let g = e.curve.domain().grid(4000);
    for pair in g.windows(2) {
        let jump = cc.theta.value(pair[1]).unwrap() - cc.theta.value(pair[0]).unwrap();
        assert!(jump.abs() < 0.1);
    }
    let v = vertex_function(&w);
    for t in [0.3, 1.0, 2.0] {
        let (k1, k2) = (w.k1.value(t).unwrap(), w.k2.value(t).unwrap());
        let want = -v.value(t).unwrap() / (k1 * k1 + k2 * k2);
        assert!((cc.theta.deriv(1, t).unwrap() - want).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn evolute_of_parallel_is_unchanged(lambda in -1.5f64..0.45, t in 0.0f64..TAU) {
        let e = catalog::ellipse(2.0, 1.0).unwrap();
        let base = evolute_front(&e.curve).unwrap();
        let moved = evolute_front(&parallel(&e.curve, lambda)).unwrap();
        let (p, q) = (base.value(t).unwrap(), moved.value(t).unwrap());
        prop_assert!((p[0] - q[0]).hypot(p[1] - q[1]) < 1e-10);
    }
}
