use std::fmt;

use super::shape::{convexity, is_simple_closed, zeros_isolated, ConvexCase, SIMPLE_RESOLUTION};
use crate::error::{Error, Result};
use crate::events::{
    classify_point, find_inflections, find_singularities, find_vertices, DependencyWitness, NMType, DEFAULT_MAX_ORDER,
};
use crate::evolute::{resolve_alpha, resolve_dual_alpha};
use crate::legendre::{Closedness, LegendreCurve};
use crate::numerics::{find_zeros, SmoothMap, ZeroConfig, ZeroKind};

/// A sufficient condition for four vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    /// Simple convex frontal with `β = αℓ` and isolated zeros of `ℓ`, `β`.
    ConvexFrontal,
    /// Simple convex front with at least two singular and two inflection points.
    ConvexFrontInflection,
    /// Front without inflections with four singular points, or two that
    /// degenerate beyond the ordinary cusp.
    FrontSingularPoints,
    /// `α` has two points with `α = α̇ = 0`, or four zeros.
    AlphaZeros,
    /// Enough singular points of the types that force zeros of `α` or `α̇`.
    SingularTypes,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::ConvexFrontal => "convex-frontal",
            Clause::ConvexFrontInflection => "convex-front-inflection",
            Clause::FrontSingularPoints => "front-singular-points",
            Clause::AlphaZeros => "alpha-zeros",
            Clause::SingularTypes => "singular-types",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypotheses {
    pub closed_order: usize,
    pub simple: bool,
    /// `None` when the convexity test's own hypotheses fail.
    pub convex: Option<ConvexCase>,
    pub isolated_zeros: bool,
    pub immersion: bool,
    pub alpha_resolved: bool,
    pub dual_alpha_resolved: bool,
    pub inflection_count: usize,
    pub singular_count: usize,
    /// Location and type of each singular point.
    pub singular_types: Vec<(f64, Option<NMType>)>,
}

impl Hypotheses {
    pub fn is_convex(&self) -> bool {
        matches!(self.convex, Some(c) if c != ConvexCase::None)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourVertexVerdict {
    pub hypotheses: Hypotheses,
    pub fired: Vec<Clause>,
    /// Explanations for each fired clause, in the same order.
    pub reasons: Vec<String>,
    pub predicted: usize,
    pub measured: usize,
    pub consistent: bool,
}

/// `α̇` vanishes at `t0`, up to the scale of `α̇` over the domain.
fn derivative_vanishes(alpha: &SmoothMap, t0: f64) -> bool {
    let scale = alpha
        .domain()
        .grid(512)
        .into_iter()
        .filter_map(|t| alpha.deriv(1, t).ok())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    alpha.deriv(1, t0).map(|v| v.abs() <= 1e-7 * scale).unwrap_or(false)
}

/// Checks every clause on a closed curve and counts the vertices.
pub fn four_vertex_verdict(curve: &LegendreCurve, witness: &DependencyWitness) -> Result<FourVertexVerdict> {
    let closed_order = match curve.closed {
        Closedness::Closed(n) if n >= 1 => n,
        _ => {
            return Err(Error::Hypothesis(format!(
                "{} is not a closed Legendre curve",
                curve.label
            )))
        }
    };
    let cfg = ZeroConfig::periodic(true);
    let simple = is_simple_closed(curve, SIMPLE_RESOLUTION)?.simple;
    let isolated_zeros = zeros_isolated(curve)?;
    let convex = if simple && isolated_zeros {
        Some(convexity(curve)?.case)
    } else {
        None
    };
    let immersion = curve.is_immersion()?.holds();
    let alpha = resolve_alpha(curve).into_result().ok();
    let dual = resolve_dual_alpha(curve).into_result().ok();
    let inflections = find_inflections(curve, &cfg);
    let singular = find_singularities(curve, &cfg);
    let singular_types: Vec<(f64, Option<NMType>)> = singular
        .iter()
        .map(|z| {
            (
                z.location,
                z.is_isolated()
                    .then(|| classify_point(curve, z.location, DEFAULT_MAX_ORDER))
                    .flatten(),
            )
        })
        .collect();
    let vertices = find_vertices(curve, witness, &cfg)?;

    let hyp = Hypotheses {
        closed_order,
        simple,
        convex,
        isolated_zeros,
        immersion,
        alpha_resolved: alpha.is_some(),
        dual_alpha_resolved: dual.is_some(),
        inflection_count: inflections.len(),
        singular_count: singular.len(),
        singular_types,
    };

    let mut fired = Vec::new();
    let mut reasons = Vec::new();
    let mut fire = |c: Clause, why: String| {
        fired.push(c);
        reasons.push(why);
    };

    if hyp.simple && hyp.is_convex() && hyp.isolated_zeros && hyp.alpha_resolved {
        fire(
            Clause::ConvexFrontal,
            format!("simple convex frontal, case {}", hyp.convex.unwrap()),
        );
    }
    if hyp.immersion && hyp.simple && hyp.is_convex() && hyp.singular_count >= 2 && hyp.inflection_count >= 2 {
        fire(
            Clause::ConvexFrontInflection,
            format!(
                "simple convex front with {} singular and {} inflection points",
                hyp.singular_count, hyp.inflection_count
            ),
        );
    }
    if hyp.immersion && hyp.inflection_count == 0 {
        let degenerate = hyp
            .singular_types
            .iter()
            .filter(|(_, t)| t.is_some_and(NMType::degenerates_beyond_ordinary_cusp))
            .count();
        if hyp.singular_count >= 4 {
            fire(
                Clause::FrontSingularPoints,
                format!("front with {} singular points", hyp.singular_count),
            );
        } else if degenerate >= 2 {
            fire(
                Clause::FrontSingularPoints,
                format!("front with {degenerate} singular points beyond the ordinary cusp"),
            );
        }
    }
    if let Some(a) = &alpha {
        let zeros = find_zeros(a, &cfg);
        let double = zeros
            .iter()
            .filter(|z| z.multiplicity >= 2 || matches!(z.kind, ZeroKind::Tangential))
            .count();
        if double >= 2 {
            fire(Clause::AlphaZeros, format!("{double} points with α = α' = 0"));
        } else if zeros.len() >= 4 {
            fire(Clause::AlphaZeros, format!("α has {} zeros", zeros.len()));
        }
    }
    if let Some(reason) = singular_type_clause(&hyp, alpha.as_ref(), dual.as_ref(), &vertices) {
        fire(Clause::SingularTypes, reason);
    }

    let predicted = if fired.is_empty() { 0 } else { 4 };
    let measured = vertices.len();
    Ok(FourVertexVerdict {
        hypotheses: hyp,
        consistent: measured >= predicted,
        fired,
        reasons,
        predicted,
        measured,
    })
}

/// The type conditions with `β = αℓ`, with `ℓ = α̃β`, and for a general
/// witness.
///
/// The condition `ḟ(0) = 0` on a point of type `(n, 2n)` is read off as
/// `α̇(t0) = 0` when `α` exists, and as a vertex at `t0` otherwise.
fn singular_type_clause(
    hyp: &Hypotheses,
    alpha: Option<&SmoothMap>,
    dual: Option<&SmoothMap>,
    vertices: &[crate::numerics::Zero],
) -> Option<String> {
    let typed: Vec<(f64, NMType)> = hyp
        .singular_types
        .iter()
        .filter_map(|(t, ty)| ty.map(|ty| (*t, ty)))
        .collect();
    let period_dist = |a: f64, b: f64| (a - b).abs();
    let flat = |t0: f64| match alpha {
        Some(a) => derivative_vanishes(a, t0),
        None => vertices.iter().any(|v| period_dist(v.location, t0) < 1e-6),
    };
    let count = |pred: &dyn Fn(f64, NMType) -> bool| typed.iter().filter(|(t, ty)| pred(*t, *ty)).count();

    if alpha.is_some() {
        let n = count(&|t, ty| ty.n == ty.k() && flat(t));
        if n >= 4 {
            return Some(format!("{n} points of type (n, 2n) with α' = 0"));
        }
        let n = count(&|_, ty| ty.n == ty.k() + 1);
        if n >= 4 {
            return Some(format!("{n} points of type (n, 2n - 1)"));
        }
        let n = count(&|_, ty| ty.n >= ty.k() + 2);
        if n >= 2 {
            return Some(format!("{n} points of type (n, m) with n >= k + 2"));
        }
    }
    if dual.is_some() {
        let n = count(&|_, ty| ty.n + 1 == ty.k());
        if n >= 4 {
            return Some(format!("{n} points of type (n, 2n + 1)"));
        }
        let n = count(&|_, ty| ty.n + 2 <= ty.k());
        if n >= 2 {
            return Some(format!("{n} points of type (n, m) with n + 2 <= k"));
        }
    }
    let n = count(&|t, ty| (ty.n == ty.k() && flat(t)) || ty.n >= ty.k() + 2 || ty.n + 2 <= ty.k());
    if n >= 4 {
        return Some(format!("{n} points of the types forcing a vertex"));
    }
    None
}
