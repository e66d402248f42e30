//! Evolutes of fronts and frontals, parallel curves and the curvature curve.

mod ratio;

pub use ratio::{resolve_ratio, RatioResolution, RatioStatus};

use crate::error::{Error, Result};
use crate::events::DependencyWitness;
use crate::legendre::{Closedness, LegendreCurve, PlaneMap};
use crate::numerics::{Antiderivative, Series, SmoothMap};

/// Status of the smooth `α` with `β = αℓ`.
pub type AlphaStatus = RatioStatus;

/// Result of solving `β = αℓ` for a smooth `α`.
#[derive(Debug, Clone)]
pub struct AlphaResolution {
    pub alpha: Option<SmoothMap>,
    pub residual: f64,
    pub status: AlphaStatus,
}

impl AlphaResolution {
    pub fn is_resolved(&self) -> bool {
        self.status == RatioStatus::Resolved
    }

    pub fn into_result(self) -> Result<SmoothMap> {
        RatioResolution {
            ratio: self.alpha,
            residual: self.residual,
            status: self.status,
        }
        .into_result()
    }
}

impl From<RatioResolution> for AlphaResolution {
    fn from(r: RatioResolution) -> Self {
        AlphaResolution {
            alpha: r.ratio,
            residual: r.residual,
            status: r.status,
        }
    }
}

/// Smooth `α` with `β = αℓ`, if one exists.
pub fn resolve_alpha(curve: &LegendreCurve) -> AlphaResolution {
    let c = curve.curvature_pair();
    resolve_ratio(&c.beta, &c.ell, curve.is_closed()).into()
}

/// Smooth `α̃` with `ℓ = α̃β`, if one exists.
pub fn resolve_dual_alpha(curve: &LegendreCurve) -> AlphaResolution {
    let c = curve.curvature_pair();
    resolve_ratio(&c.ell, &c.beta, curve.is_closed()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvoluteSource {
    /// `γ - (β/ℓ)ν`.
    Front,
    /// `γ - αν`.
    Frontal,
}

#[derive(Debug, Clone)]
pub struct EvoluteCurve {
    pub point: PlaneMap,
    pub source: EvoluteSource,
    pub parent: String,
}

impl EvoluteCurve {
    pub fn value(&self, t: f64) -> Result<[f64; 2]> {
        self.point.value(t)
    }
}

/// Evolute of a front without inflection points.
pub fn evolute_front(curve: &LegendreCurve) -> Result<EvoluteCurve> {
    let c = curve.curvature_pair();
    for t in curve.domain().grid(4096) {
        if c.ell.value(t)?.abs() <= 1e-10 {
            return Err(Error::Inflection(t));
        }
    }
    let ratio = c.beta.div(&c.ell);
    Ok(EvoluteCurve {
        point: curve.gamma.sub(&curve.nu.scale_by(&ratio)),
        source: EvoluteSource::Front,
        parent: curve.label.clone(),
    })
}

/// Evolute `γ - αν` of a frontal with resolvable `α`.
pub fn evolute_frontal(curve: &LegendreCurve) -> Result<EvoluteCurve> {
    let alpha = resolve_alpha(curve).into_result()?;
    Ok(evolute_with_alpha(curve, &alpha))
}

pub fn evolute_with_alpha(curve: &LegendreCurve, alpha: &SmoothMap) -> EvoluteCurve {
    EvoluteCurve {
        point: curve.gamma.sub(&curve.nu.scale_by(alpha)),
        source: EvoluteSource::Frontal,
        parent: curve.label.clone(),
    }
}

/// Parallel curve `(γ + λν, ν)`.
pub fn parallel(curve: &LegendreCurve, lambda: f64) -> LegendreCurve {
    curve.parallel(lambda)
}

/// Curvature curve together with its continuous angle function `θ`.
#[derive(Debug, Clone)]
pub struct CurvatureCurve {
    pub curve: LegendreCurve,
    /// `ν^c = (cos θ, sin θ)`.
    pub theta: SmoothMap,
}

/// `γ^c = (∫ℓ, ∫β)` with `ν^c = (k1, k2)/|k|`.
pub fn curvature_curve(curve: &LegendreCurve, witness: &DependencyWitness) -> Result<CurvatureCurve> {
    let c = curve.curvature_pair();
    let d = curve.domain();
    let (k1, k2) = (&witness.k1, &witness.k2);
    let n = 4096;
    let grid = d.grid(n);
    let mut lifted = Vec::with_capacity(n + 1);
    let mut prev: Option<f64> = None;
    for &t in &grid {
        let (a, b) = (k1.value(t)?, k2.value(t)?);
        if a.hypot(b) <= 1e-12 {
            return Err(Error::WitnessInvalid(format!("witness vanishes at t = {t}")));
        }
        let raw = b.atan2(a);
        let th = match prev {
            None => raw,
            Some(p) => {
                let mut step = raw - p.rem_euclid(std::f64::consts::TAU);
                step -= std::f64::consts::TAU * (step / std::f64::consts::TAU).round();
                p + step
            }
        };
        lifted.push(th);
        prev = Some(th);
    }
    let h = d.len() / n as f64;
    let theta_dot = k1
        .mul(&k2.derivative())
        .sub(&k2.mul(&k1.derivative()))
        .div(&k1.mul(k1).add(&k2.mul(k2)));
    let (ka, kb, td) = (k1.clone(), k2.clone(), theta_dot.clone());
    let table = std::sync::Arc::new(lifted);
    let table2 = table.clone();
    let (ka2, kb2) = (k1.clone(), k2.clone());
    let a0 = d.a;
    let lift = move |tab: &[f64], t: f64, raw: f64| -> f64 {
        let i = (((t - a0) / h).round().max(0.0) as usize).min(tab.len() - 1);
        let near = tab[i];
        raw + std::f64::consts::TAU * ((near - raw) / std::f64::consts::TAU).round()
    };
    let lift2 = lift;
    let theta = SmoothMap::from_parts(
        d,
        theta_dot.declared_order() + 1,
        theta_dot.is_analytic(),
        move |t, k| {
            let raw = kb.value(t)?.atan2(ka.value(t)?);
            let v = lift(&table, t, raw);
            if k == 0 {
                return Ok(Series::constant(v, 0));
            }
            let inner = td.series(t, k - 1)?;
            let mut coeffs = vec![v];
            coeffs.extend(inner.coeffs().iter().enumerate().map(|(j, x)| x / (j + 1) as f64));
            Ok(Series(coeffs.into()))
        },
        move |t| {
            let raw = kb2.value(t)?.atan2(ka2.value(t)?);
            Ok(lift2(&table2, t, raw))
        },
    );

    let gx = Antiderivative::new(&c.ell)?.to_map();
    let gy = Antiderivative::new(&c.beta)?.to_map();
    let nu = PlaneMap::new(k1.clone(), k2.clone()).normalized();
    let closed = match curve.closed {
        Closedness::Open => Closedness::Open,
        Closedness::Closed(_) => {
            let end = [gx.value(d.b)?, gy.value(d.b)?];
            if end[0].hypot(end[1]) < 1e-8 {
                curve.closed
            } else {
                Closedness::Open
            }
        }
    };
    Ok(CurvatureCurve {
        curve: LegendreCurve::new(
            PlaneMap::new(gx, gy),
            nu,
            closed,
            format!("{} (curvature curve)", curve.label),
        ),
        theta,
    })
}

#[cfg(test)]
mod tests;
