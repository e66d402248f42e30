use std::sync::Arc;

use crate::error::{Error, EvalError, Result};
use crate::numerics::{find_zeros, Interval, Series, SmoothMap, ZeroConfig};

/// Extra Taylor terms kept in the quotient expansion at a zero of the
/// denominator.
const QUOTIENT_TERMS: usize = 10;

/// Highest vanishing order of the denominator that is resolved.
const MAX_ZERO_ORDER: usize = 7;

#[derive(Debug, Clone, PartialEq)]
pub enum RatioStatus {
    Resolved,
    Failed { t0: f64, reason: String },
}

/// Smooth quotient `q` with `num = q * den`, or the place where none exists.
#[derive(Debug, Clone)]
pub struct RatioResolution {
    pub ratio: Option<SmoothMap>,
    /// `sup |num - q den|` over the check grid (infinite when unresolved).
    pub residual: f64,
    pub status: RatioStatus,
}

impl RatioResolution {
    fn failed(t0: f64, reason: impl Into<String>) -> Self {
        RatioResolution {
            ratio: None,
            residual: f64::INFINITY,
            status: RatioStatus::Failed {
                t0,
                reason: reason.into(),
            },
        }
    }

    pub fn is_resolved(&self) -> bool {
        self.status == RatioStatus::Resolved
    }

    pub fn into_result(self) -> Result<SmoothMap> {
        match self.status {
            RatioStatus::Resolved => Ok(self.ratio.expect("resolved ratio")),
            RatioStatus::Failed { t0, reason } => Err(Error::AlphaUnresolved { t: t0, reason }),
        }
    }
}

/// Expansion of the quotient at one zero of the denominator.
#[derive(Debug, Clone)]
struct Pole {
    at: f64,
    quotient: Series,
}

struct Ratio {
    num: SmoothMap,
    den: SmoothMap,
    eps: f64,
    poles: Vec<Pole>,
    domain: Interval,
    periodic: bool,
}

impl Ratio {
    fn nearest(&self, t: f64) -> Option<(&Pole, f64)> {
        let len = self.domain.len();
        self.poles
            .iter()
            .map(|p| {
                let mut h = t - p.at;
                if self.periodic {
                    h -= len * (h / len).round();
                }
                (p, h)
            })
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
    }

    fn direct(&self, t: f64, order: usize) -> std::result::Result<Option<Series>, EvalError> {
        let d = self.den.series(t, order)?;
        if d.value().abs() > self.eps {
            return Ok(Some(self.num.series(t, order)?.div(&d)?));
        }
        Ok(None)
    }

    fn series(&self, t: f64, order: usize) -> std::result::Result<Series, EvalError> {
        if let Some(s) = self.direct(t, order)? {
            return Ok(s);
        }
        match self.nearest(t) {
            Some((p, h)) => Ok(p.quotient.recenter(h, order)),
            None => Err(EvalError::DivisionByZero),
        }
    }

    fn value(&self, t: f64) -> std::result::Result<f64, EvalError> {
        let d = self.den.value(t)?;
        if d.abs() > self.eps {
            return Ok(self.num.value(t)? / d);
        }
        match self.nearest(t) {
            Some((p, h)) => Ok(p.quotient.eval_at(h)),
            None => Err(EvalError::DivisionByZero),
        }
    }
}

/// Resolve `q = num / den` as a smooth function.
///
/// Away from the zeros of `den` (where `|den| > 1e-6 (1 + sup|den|)`) the
/// quotient is evaluated directly. At a zero `t0` of order `j` both Taylor
/// expansions are divided by `(t - t0)^j`, which requires `num` to vanish to
/// order at least `j` there.
pub fn resolve_ratio(num: &SmoothMap, den: &SmoothMap, periodic: bool) -> RatioResolution {
    let domain = den.domain();
    let grid = domain.grid(4096);
    let mut sup_den = 0.0f64;
    let mut sup_num = 0.0f64;
    for &t in &grid {
        match (num.value(t), den.value(t)) {
            (Ok(n), Ok(d)) => {
                sup_den = sup_den.max(d.abs());
                sup_num = sup_num.max(n.abs());
            }
            _ => return RatioResolution::failed(t, "numerator or denominator not evaluable"),
        }
    }
    let eps = 1e-6 * (1.0 + sup_den);
    let zeros = find_zeros(den, &ZeroConfig::periodic(periodic));
    let mut poles = Vec::new();
    for z in &zeros {
        if !z.is_isolated() {
            return RatioResolution::failed(z.location, "denominator vanishes on an interval");
        }
        let t0 = z.location;
        let max_k = den.declared_order().min(num.declared_order());
        let j = match crate::numerics::vanishing_order(den, t0, max_k.min(MAX_ZERO_ORDER)) {
            Some(j) => j,
            None => return RatioResolution::failed(t0, "denominator vanishes to unresolved order"),
        };
        let order = (j + QUOTIENT_TERMS).min(max_k);
        if order < j + 1 {
            return RatioResolution::failed(t0, "declared smoothness too low for the expansion");
        }
        let (ns, ds) = match (num.series(t0, order), den.series(t0, order)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return RatioResolution::failed(t0, "expansion not evaluable"),
        };
        let nd = ns.derivatives();
        let scale = nd[1..].iter().fold(1.0f64, |m, v| m.max(v.abs()));
        if let Some(i) = (0..j).find(|&i| nd[i].abs() > 1e-7 * scale) {
            return RatioResolution::failed(
                t0,
                format!("numerator has order {i} < {j}, the order of the denominator"),
            );
        }
        let quotient = match ns.shift_down(j).div(&ds.shift_down(j)) {
            Ok(q) => q,
            Err(_) => return RatioResolution::failed(t0, "leading coefficient vanished"),
        };
        poles.push(Pole { at: t0, quotient });
    }

    // numerically small but nonzero denominators with no zero nearby
    for &t in &grid {
        if den.value(t).map(|d| d.abs() <= eps).unwrap_or(true) && poles.is_empty() {
            return RatioResolution::failed(t, "denominator nearly vanishes without a located zero");
        }
    }

    let ratio = Arc::new(Ratio {
        num: num.clone(),
        den: den.clone(),
        eps,
        poles,
        domain,
        periodic,
    });

    // agreement of both evaluations just outside the band
    for p in &ratio.poles {
        let d = match den.series(p.at, den.declared_order().min(MAX_ZERO_ORDER)) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let lead = d.coeffs().iter().enumerate().skip(1).find(|(_, c)| c.abs() > 0.0);
        let Some((j, c)) = lead else { continue };
        let delta = 1.5 * (eps / c.abs()).powf(1.0 / j as f64);
        for s in [-1.0, 1.0] {
            let t = p.at + s * delta;
            if !periodic && (t < domain.a || t > domain.b) {
                continue;
            }
            let (Ok(nv), Ok(dv)) = (num.value(t), den.value(t)) else {
                continue;
            };
            if dv.abs() <= eps {
                continue;
            }
            let direct = nv / dv;
            let mut h = t - p.at;
            if periodic {
                h -= domain.len() * (h / domain.len()).round();
            }
            let expanded = p.quotient.eval_at(h);
            if (direct - expanded).abs() > 1e-5 * (1.0 + direct.abs()) {
                return RatioResolution::failed(p.at, "expansion disagrees with the quotient at the band edge");
            }
        }
    }

    let (r1, r2) = (ratio.clone(), ratio.clone());
    let map = SmoothMap::from_parts(
        domain,
        num.declared_order().min(den.declared_order()),
        num.is_analytic() && den.is_analytic(),
        move |t, k| r1.series(t, k),
        move |t| r2.value(t),
    );

    let mut residual = 0.0f64;
    for t in domain.grid(4096) {
        match (map.value(t), num.value(t), den.value(t)) {
            (Ok(q), Ok(n), Ok(d)) => residual = residual.max((n - q * d).abs()),
            _ => return RatioResolution::failed(t, "quotient not evaluable"),
        }
    }
    if residual > 1e-7 * (1.0 + sup_num) {
        let worst = domain
            .grid(4096)
            .into_iter()
            .max_by(|&a, &b| {
                let r = |t: f64| (num.value(t).unwrap() - map.value(t).unwrap() * den.value(t).unwrap()).abs();
                r(a).total_cmp(&r(b))
            })
            .unwrap_or(domain.a);
        return RatioResolution::failed(worst, format!("residual {residual:e} too large"));
    }

    // zero-free denominators keep a symbolic quotient when possible
    let ratio_map = if ratio.poles.is_empty() { num.div(den) } else { map };
    RatioResolution {
        ratio: Some(ratio_map),
        residual,
        status: RatioStatus::Resolved,
    }
}
