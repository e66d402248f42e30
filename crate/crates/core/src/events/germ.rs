use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{differentiate, Expr};
use crate::legendre::{Closedness, CurvaturePair, LegendreCurve, Orientation, PlaneMap};
use crate::numerics::{Interval, Series, SmoothMap};

/// Germ curves live on `[-GERM_HALF_WIDTH, GERM_HALF_WIDTH]`.
pub const GERM_HALF_WIDTH: f64 = 0.5;

/// Default bound on the orders examined by [`classify_point`].
pub const DEFAULT_MAX_ORDER: usize = 7;

/// Local type `(n, m)`: the curve is `R`-equivalent to `(±tⁿ, tᵐ f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NMType {
    pub n: usize,
    pub m: usize,
}

impl NMType {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m <= n {
            return Err(Error::InvalidParameter(format!("type ({n}, {m}) needs 1 <= n < m")));
        }
        Ok(NMType { n, m })
    }

    /// `k = m - n`.
    pub fn k(self) -> usize {
        self.m - self.n
    }

    pub fn is_singular(self) -> bool {
        self.n >= 2
    }

    /// "m/n cusp" for singular types.
    pub fn cusp_name(self) -> Option<String> {
        self.is_singular().then(|| format!("{}/{} cusp", self.m, self.n))
    }

    /// Worse than the ordinary `(2,3)` cusp.
    pub fn degenerates_beyond_ordinary_cusp(self) -> bool {
        self.n >= 3 || (self.n == 2 && self.m >= 5)
    }
}

impl fmt::Display for NMType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.m)
    }
}

fn leading_order(s: &Series, max_order: usize) -> Option<usize> {
    let d = s.derivatives();
    let scale = d[1..].iter().fold(1.0f64, |m, v| m.max(v.abs()));
    (1..=max_order.min(d.len() - 1)).find(|&j| d[j].abs() > 1e-7 * scale)
}

/// Type of the frontal at `t0`, read off in the frame `(μ(t0), ν(t0))`.
///
/// `n` is the vanishing order of `(γ - γ(t0))·μ(t0)` and `m` that of
/// `(γ - γ(t0))·ν(t0)`. `None` when either exceeds `max_order` or `n >= m`.
pub fn classify_point(curve: &LegendreCurve, t0: f64, max_order: usize) -> Option<NMType> {
    let order = max_order.min(curve.gamma.declared_order()).max(1);
    let gx = curve.gamma.x.series(t0, order).ok()?;
    let gy = curve.gamma.y.series(t0, order).ok()?;
    let nu = curve.nu.value(t0).ok()?;
    let mu = [-nu[1], nu[0]];
    let along = |v: [f64; 2]| {
        Series(
            gx.coeffs()
                .iter()
                .zip(gy.coeffs())
                .map(|(a, b)| v[0] * a + v[1] * b)
                .collect(),
        )
    };
    let n = leading_order(&along(mu), order)?;
    let m = leading_order(&along(nu), order)?;
    (n < m).then_some(NMType { n, m })
}

/// Parts of the germ formulas shared by the curve, its curvature and `α̃`.
struct GermParts {
    n: f64,
    k: f64,
    sign: f64,
    f: Expr,
    /// `m tᵏ f + tᵏ⁺¹ ḟ`.
    w: Expr,
    /// `w² + n²`.
    s: Expr,
    /// `m k f + (m + k + 1) t ḟ + t² f̈`.
    d: Expr,
}

fn tp(p: i32) -> Expr {
    Expr::powi(Expr::t(), p)
}

fn parts(n: usize, m: usize, f: &Expr, sign: Orientation) -> Result<GermParts> {
    NMType::new(n, m)?;
    let f0 = f.evaluate(0.0)?;
    if f0 == 0.0 || !f0.is_finite() {
        return Err(Error::InvalidParameter("f(0) must be nonzero".into()));
    }
    let (nf, mf) = (n as f64, m as f64);
    let k = m - n;
    let kf = k as f64;
    let df = differentiate(f);
    let ddf = differentiate(&df);
    let w = Expr::add(
        Expr::mul(Expr::c(mf), Expr::mul(tp(k as i32), f.clone())),
        Expr::mul(tp(k as i32 + 1), df.clone()),
    );
    let s = Expr::add(Expr::powi(w.clone(), 2), Expr::c(nf * nf));
    let d = Expr::add(
        Expr::add(
            Expr::mul(Expr::c(mf * kf), f.clone()),
            Expr::mul(Expr::c(mf + kf + 1.0), Expr::mul(Expr::t(), df)),
        ),
        Expr::mul(tp(2), ddf),
    );
    let sign = match sign {
        Orientation::Plus => 1.0,
        Orientation::Minus => -1.0,
    };
    Ok(GermParts {
        n: nf,
        k: kf,
        sign,
        f: f.clone(),
        w,
        s,
        d,
    })
}

fn germ_domain() -> Interval {
    Interval::new(-GERM_HALF_WIDTH, GERM_HALF_WIDTH)
}

/// `γ = (±tⁿ, tᵐ f)` with `ν = (-w, ±n)/√(w² + n²)`, `w = m tᵏ f + tᵏ⁺¹ ḟ`.
pub fn germ_curve(n: usize, m: usize, f: &Expr, sign: Orientation) -> Result<LegendreCurve> {
    let p = parts(n, m, f, sign)?;
    let d = germ_domain();
    let map = |e: Expr| SmoothMap::from_expr(e, d);
    let root = Expr::sqrt(p.s.clone());
    let gamma = PlaneMap::new(
        map(Expr::mul(Expr::c(p.sign), tp(n as i32))),
        map(Expr::mul(tp(m as i32), p.f.clone())),
    );
    let nu = PlaneMap::new(
        map(Expr::div(Expr::neg(p.w.clone()), root.clone())),
        map(Expr::div(Expr::c(p.sign * p.n), root)),
    );
    let sign_tag = if p.sign > 0.0 { "+" } else { "-" };
    Ok(LegendreCurve::new(
        gamma,
        nu,
        Closedness::Open,
        format!("germ({n},{m},{sign_tag})"),
    ))
}

/// Closed forms `ℓ = ±n tᵏ⁻¹ D / S` and `β = -tⁿ⁻¹ √S`.
pub fn germ_curvature(n: usize, m: usize, f: &Expr, sign: Orientation) -> Result<CurvaturePair> {
    let p = parts(n, m, f, sign)?;
    let d = germ_domain();
    let ell = Expr::div(
        Expr::mul(Expr::c(p.sign * p.n), Expr::mul(tp(p.k as i32 - 1), p.d.clone())),
        p.s.clone(),
    );
    let beta = Expr::neg(Expr::mul(tp(n as i32 - 1), Expr::sqrt(p.s.clone())));
    Ok(CurvaturePair::new(
        SmoothMap::from_expr(ell, d),
        SmoothMap::from_expr(beta, d),
    ))
}

/// Which factorization the germ `α̃` realises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaDirection {
    /// `β = α̃ ℓ`, available when `n >= k`.
    BetaOverEll,
    /// `ℓ = α̃ β`, available when `n < k`.
    EllOverBeta,
}

#[derive(Debug, Clone)]
pub struct GermAlpha {
    pub alpha: SmoothMap,
    pub direction: AlphaDirection,
}

impl GermAlpha {
    /// `(α̃(0), α̃'(0))`.
    pub fn at_origin(&self) -> Result<(f64, f64)> {
        Ok((self.alpha.value(0.0)?, self.alpha.deriv(1, 0.0)?))
    }
}

/// Closed-form `α̃` of the `(n, m)` germ.
pub fn germ_alpha(n: usize, m: usize, f: &Expr, sign: Orientation) -> Result<GermAlpha> {
    let p = parts(n, m, f, sign)?;
    let d = germ_domain();
    let s32 = Expr::pow(p.s.clone(), Expr::c(1.5));
    let (e, direction) = if n >= m - n {
        let num = Expr::mul(tp(n as i32 - p.k as i32), s32);
        let den = Expr::mul(Expr::c(p.n), p.d.clone());
        (
            Expr::mul(Expr::c(-p.sign), Expr::div(num, den)),
            AlphaDirection::BetaOverEll,
        )
    } else {
        let num = Expr::mul(Expr::c(p.n), Expr::mul(tp(p.k as i32 - n as i32), p.d.clone()));
        (
            Expr::mul(Expr::c(-p.sign), Expr::div(num, s32)),
            AlphaDirection::EllOverBeta,
        )
    };
    Ok(GermAlpha {
        alpha: SmoothMap::from_expr(e, d),
        direction,
    })
}
