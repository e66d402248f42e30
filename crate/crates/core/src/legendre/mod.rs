//! Legendre curves `(γ, ν)`: validation, moving frame, curvature pair and
//! the standard transformations.

mod diffeo;
mod reconstruct;

pub use diffeo::{DiffeoJet, PlaneDiffeo};
pub use reconstruct::{reconstruct, CurvatureSamples, RECONSTRUCT_STEPS};

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numerics::{Interval, SmoothMap};

/// Validation grid size.
pub const VALIDATION_GRID: usize = 1000;

/// A plane-valued map `t -> (x(t), y(t))`.
#[derive(Clone, Debug)]
pub struct PlaneMap {
    pub x: SmoothMap,
    pub y: SmoothMap,
}

impl PlaneMap {
    pub fn new(x: SmoothMap, y: SmoothMap) -> Self {
        PlaneMap { x, y }
    }

    pub fn parse(x: &str, y: &str, domain: Interval) -> Result<Self> {
        Ok(PlaneMap {
            x: SmoothMap::parse(x, domain)?,
            y: SmoothMap::parse(y, domain)?,
        })
    }

    pub fn domain(&self) -> Interval {
        self.x.domain()
    }

    pub fn declared_order(&self) -> usize {
        self.x.declared_order().min(self.y.declared_order())
    }

    pub fn value(&self, t: f64) -> Result<[f64; 2]> {
        Ok([self.x.value(t)?, self.y.value(t)?])
    }

    pub fn deriv(&self, k: usize, t: f64) -> Result<[f64; 2]> {
        Ok([self.x.deriv(k, t)?, self.y.deriv(k, t)?])
    }

    pub fn derivative(&self) -> PlaneMap {
        PlaneMap::new(self.x.derivative(), self.y.derivative())
    }

    pub fn neg(&self) -> PlaneMap {
        PlaneMap::new(self.x.neg(), self.y.neg())
    }

    /// Quarter turn `J(x, y) = (-y, x)`.
    pub fn rotate(&self) -> PlaneMap {
        PlaneMap::new(self.y.neg(), self.x.clone())
    }

    pub fn dot(&self, other: &PlaneMap) -> SmoothMap {
        self.x.mul(&other.x).add(&self.y.mul(&other.y))
    }

    pub fn add(&self, other: &PlaneMap) -> PlaneMap {
        PlaneMap::new(self.x.add(&other.x), self.y.add(&other.y))
    }

    pub fn sub(&self, other: &PlaneMap) -> PlaneMap {
        PlaneMap::new(self.x.sub(&other.x), self.y.sub(&other.y))
    }

    /// Pointwise `f * self`.
    pub fn scale_by(&self, f: &SmoothMap) -> PlaneMap {
        PlaneMap::new(f.mul(&self.x), f.mul(&self.y))
    }

    pub fn scale(&self, c: f64) -> PlaneMap {
        PlaneMap::new(self.x.scale(c), self.y.scale(c))
    }

    pub fn compose(&self, s: &SmoothMap) -> PlaneMap {
        PlaneMap::new(self.x.compose(s), self.y.compose(s))
    }

    pub fn with_domain(&self, d: Interval) -> PlaneMap {
        PlaneMap::new(self.x.clone().with_domain(d), self.y.clone().with_domain(d))
    }

    /// `self / |self|`.
    pub fn normalized(&self) -> PlaneMap {
        let norm = self.dot(self).sqrt();
        PlaneMap::new(self.x.div(&norm), self.y.div(&norm))
    }

    pub fn as_exprs(&self) -> Option<(&Expr, &Expr)> {
        Some((self.x.as_expr()?, self.y.as_expr()?))
    }
}

/// Whether `(γ, ν)` closes up at the ends of its domain, and to which order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closedness {
    Open,
    Closed(usize),
}

impl Closedness {
    pub fn is_closed(self) -> bool {
        matches!(self, Closedness::Closed(_))
    }
}

impl fmt::Display for Closedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Closedness::Open => write!(f, "open"),
            Closedness::Closed(n) => write!(f, "closed (order {n})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
pub struct LegendreCurve {
    pub gamma: PlaneMap,
    pub nu: PlaneMap,
    pub closed: Closedness,
    pub label: String,
}

/// The curvature `(ℓ, β)` with `ℓ = ν̇·μ`, `β = γ̇·μ`, `μ = Jν`.
#[derive(Clone, Debug)]
pub struct CurvaturePair {
    pub ell: SmoothMap,
    pub beta: SmoothMap,
}

impl CurvaturePair {
    pub fn new(ell: SmoothMap, beta: SmoothMap) -> Self {
        CurvaturePair { ell, beta }
    }

    pub fn domain(&self) -> Interval {
        self.ell.domain()
    }

    /// `(a11 ℓ + a12 β, a21 ℓ + a22 β)`.
    pub fn linear(&self, a: [[f64; 2]; 2]) -> CurvaturePair {
        let comb = |p: f64, q: f64| self.ell.scale(p).add(&self.beta.scale(q));
        CurvaturePair::new(comb(a[0][0], a[0][1]), comb(a[1][0], a[1][1]))
    }

    /// Curvature of the parallel curve `γ + λν`: `(ℓ, β + λℓ)`.
    pub fn parallel(&self, lambda: f64) -> CurvaturePair {
        self.linear([[1.0, 0.0], [lambda, 1.0]])
    }

    /// `(ℓ + λβ, β)`.
    pub fn shear(&self, lambda: f64) -> CurvaturePair {
        self.linear([[1.0, lambda], [0.0, 1.0]])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// `max |γ̇·ν|`.
    pub legendre_residual: f64,
    /// `max |γ̇·ν| / (1 + |γ̇|)`, the quantity held to tolerance.
    pub legendre_relative: f64,
    pub legendre_at: f64,
    /// `max ||ν| - 1|`.
    pub unit_residual: f64,
    /// `max_k |(γ, ν)^(k)(a) - (γ, ν)^(k)(b)|` for closed curves.
    pub closure_residual: Option<f64>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.legendre_relative > 1e-8 {
            out.push(format!(
                "Legendre condition violated: |γ̇·ν| = {:e} at t = {}",
                self.legendre_residual, self.legendre_at
            ));
        }
        if self.unit_residual > 1e-9 {
            out.push(format!("ν is not unit: deviation {:e}", self.unit_residual));
        }
        if let Some(r) = self.closure_residual.filter(|r| *r > 1e-8) {
            out.push(format!("endpoint derivatives disagree by {r:e}"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Immersion {
    Immersion,
    /// `ℓ` and `β` vanish together at `t0`.
    Singular {
        t0: f64,
    },
}

impl Immersion {
    pub fn holds(self) -> bool {
        matches!(self, Immersion::Immersion)
    }
}

impl LegendreCurve {
    pub fn new(gamma: PlaneMap, nu: PlaneMap, closed: Closedness, label: impl Into<String>) -> Self {
        LegendreCurve {
            gamma,
            nu,
            closed,
            label: label.into(),
        }
    }

    /// Regular curve with `ν = ±J(γ̇/|γ̇|)`.
    pub fn from_regular(
        gamma: PlaneMap,
        orientation: Orientation,
        closed: Closedness,
        label: impl Into<String>,
    ) -> Result<Self> {
        let d = gamma.domain();
        for t in d.grid(VALIDATION_GRID) {
            let v = gamma.deriv(1, t)?;
            if v[0].hypot(v[1]) <= 1e-10 {
                return Err(Error::Singular(t));
            }
        }
        let tangent = gamma.derivative().normalized();
        let nu = match orientation {
            Orientation::Plus => tangent.rotate(),
            Orientation::Minus => tangent.rotate().neg(),
        };
        Ok(LegendreCurve::new(gamma, nu, closed, label))
    }

    pub fn domain(&self) -> Interval {
        self.gamma.domain()
    }

    pub fn is_closed(&self) -> bool {
        self.closed.is_closed()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `μ = Jν`.
    pub fn mu(&self) -> PlaneMap {
        self.nu.rotate()
    }

    pub fn curvature_pair(&self) -> CurvaturePair {
        let (nx, ny) = (&self.nu.x, &self.nu.y);
        // ℓ = ν̇·Jν = -ν̇x νy + ν̇y νx,  β = γ̇·Jν = -γ̇x νy + γ̇y νx
        let ell = ny.derivative().mul(nx).sub(&nx.derivative().mul(ny));
        let beta = self
            .gamma
            .y
            .derivative()
            .mul(nx)
            .sub(&self.gamma.x.derivative().mul(ny));
        CurvaturePair::new(ell, beta)
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        let d = self.domain();
        let mut legendre: (f64, f64) = (0.0, d.a);
        let mut relative = 0.0f64;
        let mut unit = 0.0f64;
        for t in d.grid(VALIDATION_GRID) {
            let g1 = self.gamma.deriv(1, t)?;
            let n = self.nu.value(t)?;
            let r = (g1[0] * n[0] + g1[1] * n[1]).abs();
            if r > legendre.0 {
                legendre = (r, t);
            }
            relative = relative.max(r / (1.0 + g1[0].hypot(g1[1])));
            unit = unit.max((n[0].hypot(n[1]) - 1.0).abs());
        }
        let closure_residual = match self.closed {
            Closedness::Open => None,
            Closedness::Closed(n) => Some(self.closure_residual(n)?),
        };
        let mut report = ValidationReport {
            legendre_residual: legendre.0,
            legendre_relative: relative,
            legendre_at: legendre.1,
            unit_residual: unit,
            closure_residual,
            passed: false,
        };
        report.passed = report.failures().is_empty();
        Ok(report)
    }

    fn closure_residual(&self, order: usize) -> Result<f64> {
        let d = self.domain();
        let order = order.min(self.gamma.declared_order()).min(self.nu.declared_order());
        let mut worst = 0.0f64;
        for k in 0..=order {
            for m in [&self.gamma, &self.nu] {
                let (pa, pb) = (m.deriv(k, d.a)?, m.deriv(k, d.b)?);
                let scale = 1.0 + pa[0].hypot(pa[1]);
                worst = worst.max((pa[0] - pb[0]).hypot(pa[1] - pb[1]) / scale);
            }
        }
        Ok(worst)
    }

    /// Largest `n <= max` such that derivatives up to order `n` agree at the
    /// ends; `Open` when even the values differ.
    pub fn detect_closed_order(&self, max: usize) -> Result<Closedness> {
        let mut best = Closedness::Open;
        for n in 0..=max {
            if self.closure_residual(n)? > 1e-8 {
                break;
            }
            best = Closedness::Closed(n);
        }
        Ok(best)
    }

    /// Largest of `|ν̇ - ℓμ|`, `|μ̇ + ℓν|`, `|γ̇ - βμ|`, each divided by
    /// `1 + |ℓ| + |β|`, over `n + 1` grid points.
    pub fn frenet_residual(&self, c: &CurvaturePair, n: usize) -> Result<f64> {
        let mut worst = 0.0f64;
        for t in self.domain().grid(n) {
            let nu = self.nu.value(t)?;
            let dnu = self.nu.deriv(1, t)?;
            let dg = self.gamma.deriv(1, t)?;
            let (l, b) = (c.ell.value(t)?, c.beta.value(t)?);
            let mu = [-nu[1], nu[0]];
            let dmu = [-dnu[1], dnu[0]];
            let scale = 1.0 + l.abs() + b.abs();
            let r1 = (dnu[0] - l * mu[0]).hypot(dnu[1] - l * mu[1]);
            let r2 = (dmu[0] + l * nu[0]).hypot(dmu[1] + l * nu[1]);
            let r3 = (dg[0] - b * mu[0]).hypot(dg[1] - b * mu[1]);
            worst = worst.max(r1.max(r2).max(r3) / scale);
        }
        Ok(worst)
    }

    /// Whether `(ℓ, β)` never vanishes simultaneously.
    pub fn is_immersion(&self) -> Result<Immersion> {
        let c = self.curvature_pair();
        is_immersion_pair(&c)
    }

    /// `(γ ∘ s, ν ∘ s)` for a monotone `s` mapping its domain onto ours.
    pub fn reparametrize(&self, s: &SmoothMap) -> Result<LegendreCurve> {
        let nd = s.domain();
        let d = self.domain();
        let mut sign = 0.0;
        for u in nd.grid(VALIDATION_GRID) {
            let ds = s.deriv(1, u)?;
            if ds.abs() <= 1e-10 || (sign != 0.0 && ds.signum() != sign) {
                return Err(Error::NotMonotone(u));
            }
            sign = ds.signum();
        }
        let (sa, sb) = (s.value(nd.a)?, s.value(nd.b)?);
        let (lo, hi) = if sa < sb { (sa, sb) } else { (sb, sa) };
        let tol = 1e-9 * (1.0 + d.len());
        if (lo - d.a).abs() > tol || (hi - d.b).abs() > tol {
            return Err(Error::InvalidParameter(format!(
                "reparametrization maps onto [{lo}, {hi}], expected [{}, {}]",
                d.a, d.b
            )));
        }
        Ok(LegendreCurve::new(
            self.gamma.compose(s),
            self.nu.compose(s),
            self.closed,
            format!("{} (reparametrized)", self.label),
        ))
    }

    /// `(γ, -ν)`.
    pub fn flip_normal(&self) -> LegendreCurve {
        LegendreCurve::new(
            self.gamma.clone(),
            self.nu.neg(),
            self.closed,
            format!("{} (flipped)", self.label),
        )
    }

    /// `(Φ ∘ γ, ν̄/|ν̄|)`.
    pub fn push_forward(&self, phi: &PlaneDiffeo) -> Result<LegendreCurve> {
        let d = self.domain();
        for t in d.grid(VALIDATION_GRID) {
            let p = self.gamma.value(t)?;
            let jet = phi.jet(p);
            let det = jet.det();
            if det.abs() <= 1e-10 {
                return Err(Error::DegenerateJacobian(t));
            }
            let nb = jet.nu_bar(self.nu.value(t)?);
            if nb[0].hypot(nb[1]) <= 1e-10 {
                return Err(Error::DegenerateJacobian(t));
            }
        }
        let (gamma, nu) = phi.apply(&self.gamma, &self.nu);
        Ok(LegendreCurve::new(
            gamma,
            nu,
            self.closed,
            format!("{} (pushed forward)", self.label),
        ))
    }

    /// Parallel curve `(γ + λν, ν)`.
    pub fn parallel(&self, lambda: f64) -> LegendreCurve {
        LegendreCurve::new(
            self.gamma.add(&self.nu.scale(lambda)),
            self.nu.clone(),
            self.closed,
            format!("{} (parallel {lambda})", self.label),
        )
    }

    /// Sample points `γ(t)` on `n + 1` grid points.
    pub fn polyline(&self, n: usize) -> Result<Vec<[f64; 2]>> {
        self.domain().grid(n).into_iter().map(|t| self.gamma.value(t)).collect()
    }
}

/// Immersion test on a curvature pair: minimum of `(ℓ² + β²)/scale` over a
/// grid, refined near the smallest samples.
pub fn is_immersion_pair(c: &CurvaturePair) -> Result<Immersion> {
    let d = c.domain();
    let n = 4096;
    let ts = d.grid(n);
    let q = |t: f64| -> f64 {
        match (c.ell.value(t), c.beta.value(t)) {
            (Ok(l), Ok(b)) => l * l + b * b,
            _ => f64::NAN,
        }
    };
    let qs: Vec<f64> = ts.iter().map(|&t| q(t)).collect();
    let scale = qs
        .iter()
        .filter(|v| v.is_finite())
        .fold(0.0f64, |m, v| m.max(*v))
        .max(1e-300);
    let h = d.len() / n as f64;
    let mut idx: Vec<usize> = (0..=n).collect();
    idx.sort_by(|&i, &j| qs[i].total_cmp(&qs[j]));
    for &i in idx.iter().take(16) {
        let (mut lo, mut hi) = ((ts[i] - h).max(d.a), (ts[i] + h).min(d.b));
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let x1 = hi - g * (hi - lo);
            let x2 = lo + g * (hi - lo);
            if q(x1) < q(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        let t0 = 0.5 * (lo + hi);
        let v = q(t0).min(qs[i]);
        if v.is_nan() || v / scale <= 1e-14 {
            let t0 = if q(t0) <= qs[i] { t0 } else { ts[i] };
            return Ok(Immersion::Singular { t0 });
        }
    }
    Ok(Immersion::Immersion)
}
