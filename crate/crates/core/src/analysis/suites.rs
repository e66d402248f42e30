use std::fmt;

use super::invariance::{verify_invariance, InvarianceConfig};
use super::verdict::four_vertex_verdict;
use crate::error::Result;
use crate::events::{find_vertices, DependencyWitness};
use crate::evolute::{curvature_curve, evolute_frontal};
use crate::legendre::LegendreCurve;
use crate::numerics::{find_zeros, ZeroConfig};

/// Offsets used by the evolute coincidence check.
pub const COINCIDENCE_OFFSETS: [f64; 5] = [-1.0, -0.3, 0.3, 0.5, 1.0];

/// Named groups of checks run by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Frenet,
    Invariance,
    Theorems,
    EvoluteCoincidence,
    CurvatureCurve,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Frenet,
        Suite::Invariance,
        Suite::Theorems,
        Suite::EvoluteCoincidence,
        Suite::CurvatureCurve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Frenet => "frenet",
            Suite::Invariance => "invariance",
            Suite::Theorems => "theorems",
            Suite::EvoluteCoincidence => "evolute-coincidence",
            Suite::CurvatureCurve => "curvature-curve",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One measured quantity against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteCheck {
    pub suite: Suite,
    pub curve: String,
    pub check: String,
    pub passed: bool,
    /// The check does not apply to this curve; it counts as passed.
    pub skipped: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: Option<String>,
}

impl SuiteCheck {
    fn measured(suite: Suite, curve: &str, check: impl Into<String>, value: f64, tolerance: f64) -> Self {
        SuiteCheck {
            suite,
            curve: curve.to_string(),
            check: check.into(),
            passed: value <= tolerance,
            skipped: false,
            value,
            tolerance,
            detail: None,
        }
    }

    fn skip(suite: Suite, curve: &str, check: impl Into<String>, why: impl Into<String>) -> Self {
        SuiteCheck {
            suite,
            curve: curve.to_string(),
            check: check.into(),
            passed: true,
            skipped: true,
            value: 0.0,
            tolerance: 0.0,
            detail: Some(why.into()),
        }
    }

    fn failed(suite: Suite, curve: &str, check: impl Into<String>, why: impl Into<String>) -> Self {
        SuiteCheck {
            suite,
            curve: curve.to_string(),
            check: check.into(),
            passed: false,
            skipped: false,
            value: f64::INFINITY,
            tolerance: 0.0,
            detail: Some(why.into()),
        }
    }

    fn with_detail(mut self, detail: Option<String>) -> Self {
        self.detail = detail;
        self
    }
}

/// Known counterexamples: closed curves with two vertices on which no
/// clause may fire.
pub const COUNTEREXAMPLES: [&str; 2] = ["nephroid", "involute_example"];

fn circle_dist(a: f64, b: f64, period: Option<f64>) -> f64 {
    match period {
        Some(p) => {
            let h = (a - b).rem_euclid(p);
            h.min(p - h)
        }
        None => (a - b).abs(),
    }
}

fn frenet(curve: &LegendreCurve) -> Vec<SuiteCheck> {
    let name = &curve.label;
    match curve.frenet_residual(&curve.curvature_pair(), 2000) {
        Ok(r) => vec![SuiteCheck::measured(Suite::Frenet, name, "frame equations", r, 1e-7)],
        Err(e) => vec![SuiteCheck::failed(
            Suite::Frenet,
            name,
            "frame equations",
            e.to_string(),
        )],
    }
}

fn invariance(curve: &LegendreCurve, w: &DependencyWitness, cfg: &InvarianceConfig) -> Vec<SuiteCheck> {
    let name = &curve.label;
    if !curve.is_closed() {
        return vec![SuiteCheck::skip(Suite::Invariance, name, "vertex sets", "open curve")];
    }
    match verify_invariance(curve, w, cfg) {
        Err(e) => vec![SuiteCheck::failed(
            Suite::Invariance,
            name,
            "vertex sets",
            e.to_string(),
        )],
        Ok(r) => r
            .checks
            .into_iter()
            .map(|c| {
                let label = format!("{} {}", c.family, c.label);
                let mut s = SuiteCheck::measured(Suite::Invariance, name, label, c.deviation, cfg.tol);
                s.passed = c.passed;
                s.with_detail(c.detail)
            })
            .collect(),
    }
}

fn theorems(curve: &LegendreCurve, w: &DependencyWitness) -> Vec<SuiteCheck> {
    let name = &curve.label;
    let suite = Suite::Theorems;
    if !curve.is_closed() {
        return vec![SuiteCheck::skip(suite, name, "four-vertex verdict", "open curve")];
    }
    let v = match four_vertex_verdict(curve, w) {
        Ok(v) => v,
        Err(e) => return vec![SuiteCheck::failed(suite, name, "four-vertex verdict", e.to_string())],
    };
    let fired: Vec<&str> = v.fired.iter().map(|c| c.name()).collect();
    let mut out = vec![SuiteCheck {
        suite,
        curve: name.clone(),
        check: "fired clauses imply four vertices".into(),
        passed: v.consistent,
        skipped: false,
        value: v.measured as f64,
        tolerance: v.predicted as f64,
        detail: Some(format!("fired [{}], measured {}", fired.join(", "), v.measured)),
    }];
    if COUNTEREXAMPLES.contains(&name.as_str()) {
        out.push(SuiteCheck {
            suite,
            curve: name.clone(),
            check: "no clause fires on a counterexample".into(),
            passed: v.fired.is_empty(),
            skipped: false,
            value: v.fired.len() as f64,
            tolerance: 0.0,
            detail: None,
        });
    }
    out
}

fn sup_distance(curve: &LegendreCurve, lambda: f64, n: usize) -> Result<f64> {
    let base = evolute_frontal(curve)?;
    let shifted = evolute_frontal(&curve.parallel(lambda))?;
    let mut worst = 0.0f64;
    for t in curve.domain().grid(n) {
        let (p, q) = (base.value(t)?, shifted.value(t)?);
        worst = worst.max((p[0] - q[0]).hypot(p[1] - q[1]));
    }
    Ok(worst)
}

fn coincidence(curve: &LegendreCurve) -> Vec<SuiteCheck> {
    let name = &curve.label;
    let suite = Suite::EvoluteCoincidence;
    if let Err(e) = evolute_frontal(curve) {
        return vec![SuiteCheck::skip(
            suite,
            name,
            "Ev(γ + λν) = Ev(γ)",
            format!("no evolute: {e}"),
        )];
    }
    COINCIDENCE_OFFSETS
        .iter()
        .map(|&l| {
            let check = format!("Ev(γ + λν) = Ev(γ), λ = {l}");
            match sup_distance(curve, l, 500) {
                Ok(d) => SuiteCheck::measured(suite, name, check, d, 1e-7),
                Err(e) => SuiteCheck::failed(suite, name, check, e.to_string()),
            }
        })
        .collect()
}

fn curvature_curve_checks(curve: &LegendreCurve, w: &DependencyWitness) -> Result<Vec<SuiteCheck>> {
    let name = &curve.label;
    let suite = Suite::CurvatureCurve;
    let cfg = ZeroConfig::periodic(curve.is_closed());
    let period = curve.is_closed().then(|| curve.domain().len());
    let cc = curvature_curve(curve, w)?;
    let vertices = find_vertices(curve, w, &cfg)?;
    let inflections = find_zeros(&cc.curve.curvature_pair().ell, &cfg);
    let zeros = if vertices.len() != inflections.len() {
        SuiteCheck::failed(
            suite,
            name,
            "zeros of V = zeros of ℓ^c",
            format!(
                "{} vertices, {} inflections of the curvature curve",
                vertices.len(),
                inflections.len()
            ),
        )
    } else {
        let worst = vertices
            .iter()
            .map(|v| {
                inflections
                    .iter()
                    .map(|z| circle_dist(v.location, z.location, period))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        SuiteCheck::measured(suite, name, "zeros of V = zeros of ℓ^c", worst, 1e-8)
    };
    let mut worst = 0.0f64;
    for t in curve.domain().grid(199) {
        let (k1, k2) = (w.k1.value(t)?, w.k2.value(t)?);
        let (d1, d2) = (w.k1.deriv(1, t)?, w.k2.deriv(1, t)?);
        let want = -(d1 * k2 - k1 * d2) / (k1 * k1 + k2 * k2);
        worst = worst.max((cc.theta.deriv(1, t)? - want).abs());
    }
    Ok(vec![
        zeros,
        SuiteCheck::measured(suite, name, "θ' = -V/|k|²", worst, 1e-8),
    ])
}

/// Runs one suite on a curve with the given witness.
pub fn run_suite(
    curve: &LegendreCurve,
    witness: &DependencyWitness,
    suite: Suite,
    cfg: &InvarianceConfig,
) -> Vec<SuiteCheck> {
    match suite {
        Suite::Frenet => frenet(curve),
        Suite::Invariance => invariance(curve, witness, cfg),
        Suite::Theorems => theorems(curve, witness),
        Suite::EvoluteCoincidence => coincidence(curve),
        Suite::CurvatureCurve => curvature_curve_checks(curve, witness).unwrap_or_else(|e| {
            vec![SuiteCheck::failed(
                suite,
                &curve.label,
                "curvature curve",
                e.to_string(),
            )]
        }),
    }
}
