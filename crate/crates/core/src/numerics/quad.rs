use std::sync::Arc;

use super::hermite::QuinticHermite;
use super::smooth::{Interval, SmoothMap};
use crate::error::{Error, Result};

/// Absolute tolerance for all quadrature.
pub const QUAD_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 48;
const MAX_EVALS: usize = 2_000_000;

struct Simpson<'a> {
    f: &'a dyn Fn(f64) -> f64,
    evals: usize,
}

impl Simpson<'_> {
    #[allow(clippy::too_many_arguments)]
    fn step(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Option<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = ((self.f)(lm), (self.f)(rm));
        self.evals += 2;
        if !flm.is_finite() || !frm.is_finite() || self.evals > MAX_EVALS {
            return None;
        }
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Some(left + right + delta / 15.0);
        }
        if depth == 0 {
            return None;
        }
        Some(
            self.step(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
                + self.step(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?,
        )
    }
}

/// Adaptive Simpson quadrature of a plain closure.
pub fn integrate_fn(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate_fn(f, b, a, tol).map(|v| -v);
    }
    let mut s = Simpson { f, evals: 3 };
    // a few fixed panels keep periodic integrands from fooling the first test
    let panels = 8;
    let w = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * w;
        let hi = if p + 1 == panels { b } else { lo + w };
        let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += s
            .step(lo, hi, fa, fm, fb, whole, tol / panels as f64, MAX_DEPTH)
            .ok_or(Error::Quadrature { a, b, tol })?;
    }
    Ok(total)
}

/// `∫_a^t f` by adaptive Simpson to absolute tolerance [`QUAD_TOL`].
pub fn integrate(f: &SmoothMap, a: f64, t: f64) -> Result<f64> {
    // error estimates are loose; aim an order of magnitude below the target
    integrate_fn(&|s| f.value(s).unwrap_or(f64::NAN), a, t, 0.1 * QUAD_TOL)
}

/// Cached antiderivative `F(t) = ∫_{a}^{t} f`, normalized to vanish at the
/// left end of the domain.
#[derive(Clone)]
pub struct Antiderivative {
    f: SmoothMap,
    table: Arc<QuinticHermite>,
}

impl Antiderivative {
    pub const NODES: usize = 4096;

    pub fn new(f: &SmoothMap) -> Result<Self> {
        Self::with_nodes(f, Self::NODES)
    }

    pub fn with_nodes(f: &SmoothMap, n: usize) -> Result<Self> {
        let d = f.domain();
        let g = d.grid(n);
        let mut y = vec![0.0; n + 1];
        let mut d1 = vec![0.0; n + 1];
        let mut d2 = vec![0.0; n + 1];
        let plain = |s: f64| f.value(s).unwrap_or(f64::NAN);
        for i in 0..=n {
            if i > 0 {
                y[i] = y[i - 1] + integrate_fn(&plain, g[i - 1], g[i], QUAD_TOL / n as f64)?;
            }
            let s = f.series(g[i], 1.min(f.declared_order()))?;
            d1[i] = s.value();
            d2[i] = if s.order() >= 1 { s.derivative_value(1) } else { 0.0 };
        }
        Ok(Antiderivative {
            f: f.clone(),
            table: Arc::new(QuinticHermite::new(d, &y, &d1, &d2)),
        })
    }

    pub fn value(&self, t: f64) -> f64 {
        self.table.value(t)
    }

    pub fn integrand(&self) -> &SmoothMap {
        &self.f
    }

    /// As a map whose derivatives of order `>= 1` come from the integrand.
    pub fn to_map(&self) -> SmoothMap {
        let (f, table) = (self.f.clone(), self.table.clone());
        let table2 = self.table.clone();
        SmoothMap::from_parts(
            self.f.domain(),
            self.f.declared_order() + 1,
            self.f.is_analytic(),
            move |t, k| {
                let v = table.value(t);
                if k == 0 {
                    return Ok(super::Series::constant(v, 0));
                }
                let inner = f.series(t, k - 1)?;
                let mut c = vec![v];
                c.extend(inner.coeffs().iter().enumerate().map(|(j, x)| x / (j + 1) as f64));
                Ok(super::Series(c.into()))
            },
            move |t| Ok(table2.value(t)),
        )
    }

    pub fn domain(&self) -> Interval {
        self.f.domain()
    }
}
