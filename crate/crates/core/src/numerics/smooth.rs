use std::fmt;
use std::sync::{Arc, OnceLock};

use super::series::Series;
use crate::error::EvalError;
use crate::expr::{Expr, Tape};

/// Closed parameter interval `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Self {
        Interval { a, b }
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        self.b <= self.a
    }

    /// `n + 1` equally spaced points including both ends.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let h = self.len() / n as f64;
        (0..=n)
            .map(|i| if i == n { self.b } else { self.a + i as f64 * h })
            .collect()
    }
}

/// Anything that can produce a Taylor expansion at a point.
pub trait SeriesFn: Send + Sync {
    fn series(&self, t: f64, order: usize) -> Result<Series, EvalError>;

    fn value(&self, t: f64) -> Result<f64, EvalError> {
        Ok(self.series(t, 0)?.value())
    }
}

struct Closure<S, V> {
    series: S,
    value: V,
}

impl<S, V> SeriesFn for Closure<S, V>
where
    S: Fn(f64, usize) -> Result<Series, EvalError> + Send + Sync,
    V: Fn(f64) -> Result<f64, EvalError> + Send + Sync,
{
    fn series(&self, t: f64, order: usize) -> Result<Series, EvalError> {
        (self.series)(t, order)
    }

    fn value(&self, t: f64) -> Result<f64, EvalError> {
        (self.value)(t)
    }
}

/// An expression with its evaluation tape, compiled on first use.
struct Symbolic {
    expr: Expr,
    tape: OnceLock<Tape>,
}

impl Symbolic {
    fn tape(&self) -> &Tape {
        self.tape.get_or_init(|| Tape::compile(&self.expr))
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> Result<f64, EvalError> + Send + Sync>;

#[derive(Clone)]
enum Source {
    Expr(Arc<Symbolic>),
    Jet(Arc<dyn SeriesFn>),
    FiniteDiff(ScalarFn),
}

/// Smoothness assumed for expression-backed maps.
pub const EXPR_ORDER: usize = 24;

/// Largest expression kept symbolic by the combinators; bigger results
/// fall back to Taylor arithmetic on the operands.
pub const SYMBOLIC_LIMIT: usize = 2000;

/// Highest derivative order available from finite-difference stencils.
pub const FD_MAX_ORDER: usize = 4;

/// An evaluable one-variable map with derivatives up to a declared order.
///
/// Expression-backed and jet-backed maps return exact derivatives (Taylor
/// arithmetic on the defining expression); finite-difference maps use
/// central stencils and are limited to order [`FD_MAX_ORDER`].
#[derive(Clone)]
pub struct SmoothMap {
    source: Source,
    domain: Interval,
    order: usize,
    analytic: bool,
}

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            Source::Expr(e) => format!("expr `{}`", e.expr),
            Source::Jet(_) => "jet".to_string(),
            Source::FiniteDiff(_) => "finite-difference".to_string(),
        };
        f.debug_struct("SmoothMap")
            .field("kind", &kind)
            .field("domain", &self.domain)
            .field("order", &self.order)
            .finish()
    }
}

impl SmoothMap {
    pub fn from_expr(e: Expr, domain: Interval) -> Self {
        SmoothMap {
            source: Source::Expr(Arc::new(Symbolic {
                expr: e,
                tape: OnceLock::new(),
            })),
            domain,
            order: EXPR_ORDER,
            analytic: true,
        }
    }

    pub fn parse(text: &str, domain: Interval) -> Result<Self, crate::error::ParseError> {
        Ok(Self::from_expr(crate::expr::parse(text)?, domain))
    }

    pub fn constant(c: f64, domain: Interval) -> Self {
        Self::from_expr(Expr::c(c), domain)
    }

    pub fn identity(domain: Interval) -> Self {
        Self::from_expr(Expr::t(), domain)
    }

    /// Map backed by a series-producing closure; `value` is derived from it.
    pub fn from_series<S>(domain: Interval, order: usize, analytic: bool, series: S) -> Self
    where
        S: Fn(f64, usize) -> Result<Series, EvalError> + Send + Sync + 'static,
    {
        let series = Arc::new(series);
        let s2 = series.clone();
        Self::from_parts(
            domain,
            order,
            analytic,
            move |t, k| series(t, k),
            move |t| Ok(s2(t, 0)?.value()),
        )
    }

    /// Map with a dedicated scalar fast path.
    pub fn from_parts<S, V>(domain: Interval, order: usize, analytic: bool, series: S, value: V) -> Self
    where
        S: Fn(f64, usize) -> Result<Series, EvalError> + Send + Sync + 'static,
        V: Fn(f64) -> Result<f64, EvalError> + Send + Sync + 'static,
    {
        SmoothMap {
            source: Source::Jet(Arc::new(Closure { series, value })),
            domain,
            order,
            analytic,
        }
    }

    pub fn from_series_fn(domain: Interval, order: usize, f: Arc<dyn SeriesFn>) -> Self {
        SmoothMap {
            source: Source::Jet(f),
            domain,
            order,
            analytic: true,
        }
    }

    /// Map known only through point evaluations; derivatives by central
    /// differences up to `order` (at most [`FD_MAX_ORDER`]).
    pub fn finite_difference<F>(f: F, domain: Interval, order: usize) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SmoothMap {
            source: Source::FiniteDiff(Arc::new(move |t| Ok(f(t)))),
            domain,
            order: order.min(FD_MAX_ORDER),
            analytic: false,
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn declared_order(&self) -> usize {
        self.order
    }

    pub fn is_analytic(&self) -> bool {
        self.analytic
    }

    pub fn as_expr(&self) -> Option<&Expr> {
        match &self.source {
            Source::Expr(e) => Some(&e.expr),
            _ => None,
        }
    }

    pub fn value(&self, t: f64) -> Result<f64, EvalError> {
        let v = match &self.source {
            Source::Expr(e) => e.tape().evaluate(t)?,
            Source::Jet(j) => j.value(t)?,
            Source::FiniteDiff(f) => f(t)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite(t))
        }
    }

    pub fn series(&self, t: f64, order: usize) -> Result<Series, EvalError> {
        if order > self.order {
            return Err(EvalError::OrderExceeded {
                requested: order,
                declared: self.order,
            });
        }
        match &self.source {
            Source::Expr(e) => e.tape().series(t, order),
            Source::Jet(j) => j.series(t, order),
            Source::FiniteDiff(f) => fd_series(f.as_ref(), t, order),
        }
    }

    /// `k`-th derivative at `t`.
    pub fn deriv(&self, k: usize, t: f64) -> Result<f64, EvalError> {
        if k == 0 {
            return self.value(t);
        }
        Ok(self.series(t, k)?.derivative_value(k))
    }

    fn combine<S, V>(&self, other: &SmoothMap, series: S, value: V) -> SmoothMap
    where
        S: Fn(Series, Series) -> Result<Series, EvalError> + Send + Sync + 'static,
        V: Fn(f64, f64) -> Result<f64, EvalError> + Send + Sync + 'static,
    {
        let (a, b) = (self.clone(), other.clone());
        let (a2, b2) = (self.clone(), other.clone());
        SmoothMap::from_parts(
            self.domain,
            self.order.min(other.order),
            self.analytic && other.analytic,
            move |t, k| series(a.series(t, k)?, b.series(t, k)?),
            move |t| value(a2.value(t)?, b2.value(t)?),
        )
    }

    fn unary<S, V>(&self, order: usize, series: S, value: V) -> SmoothMap
    where
        S: Fn(Series) -> Result<Series, EvalError> + Send + Sync + 'static,
        V: Fn(f64) -> Result<f64, EvalError> + Send + Sync + 'static,
    {
        let a = self.clone();
        let a2 = self.clone();
        SmoothMap::from_parts(
            self.domain,
            order,
            self.analytic,
            move |t, k| series(a.series(t, k)?),
            move |t| value(a2.value(t)?),
        )
    }

    fn symbolic2(&self, other: &SmoothMap, op: fn(Expr, Expr) -> Expr) -> Option<SmoothMap> {
        let (a, b) = (self.as_expr()?, other.as_expr()?);
        let e = op(a.clone(), b.clone());
        (e.node_count() <= SYMBOLIC_LIMIT).then(|| SmoothMap::from_expr(e, self.domain))
    }

    fn symbolic1(&self, op: impl FnOnce(Expr) -> Expr) -> Option<SmoothMap> {
        let e = op(self.as_expr()?.clone());
        (e.node_count() <= SYMBOLIC_LIMIT).then(|| SmoothMap::from_expr(e, self.domain))
    }

    pub fn add(&self, other: &SmoothMap) -> SmoothMap {
        self.symbolic2(other, Expr::add)
            .unwrap_or_else(|| self.combine(other, |a, b| Ok(a + b), |a, b| Ok(a + b)))
    }

    pub fn sub(&self, other: &SmoothMap) -> SmoothMap {
        self.symbolic2(other, Expr::sub)
            .unwrap_or_else(|| self.combine(other, |a, b| Ok(a - b), |a, b| Ok(a - b)))
    }

    pub fn mul(&self, other: &SmoothMap) -> SmoothMap {
        self.symbolic2(other, Expr::mul)
            .unwrap_or_else(|| self.combine(other, |a, b| Ok(a * b), |a, b| Ok(a * b)))
    }

    pub fn div(&self, other: &SmoothMap) -> SmoothMap {
        if let Some(m) = self.symbolic2(other, Expr::div) {
            return m;
        }
        self.combine(
            other,
            |a, b| a.div(&b),
            |a, b| {
                if b == 0.0 {
                    Err(EvalError::DivisionByZero)
                } else {
                    Ok(a / b)
                }
            },
        )
    }

    pub fn neg(&self) -> SmoothMap {
        self.symbolic1(Expr::neg).unwrap_or_else(|| self.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> SmoothMap {
        if let Some(m) = self.symbolic1(|e| Expr::mul(Expr::c(c), e)) {
            return m;
        }
        self.unary(self.order, move |s| Ok(s.scale(c)), move |v| Ok(c * v))
    }

    pub fn add_scalar(&self, c: f64) -> SmoothMap {
        if let Some(m) = self.symbolic1(|e| Expr::add(e, Expr::c(c))) {
            return m;
        }
        self.unary(self.order, move |s| Ok(s.add_scalar(c)), move |v| Ok(v + c))
    }

    pub fn sqrt(&self) -> SmoothMap {
        if let Some(m) = self.symbolic1(Expr::sqrt) {
            return m;
        }
        self.unary(
            self.order,
            |s| s.sqrt(),
            |v| {
                if v < 0.0 {
                    Err(EvalError::SqrtDomain(v))
                } else {
                    Ok(v.sqrt())
                }
            },
        )
    }

    pub fn powi(&self, n: i32) -> SmoothMap {
        if let Some(m) = self.symbolic1(|e| Expr::powi(e, n)) {
            return m;
        }
        self.unary(
            self.order,
            move |s| s.powi(n),
            move |v| {
                if v == 0.0 && n < 0 {
                    Err(EvalError::DivisionByZero)
                } else {
                    Ok(v.powi(n))
                }
            },
        )
    }

    pub fn powf(&self, c: f64) -> SmoothMap {
        if let Some(m) = self.symbolic1(|e| Expr::pow(e, Expr::c(c))) {
            return m;
        }
        self.unary(
            self.order,
            move |s| s.powf(c),
            move |v| {
                if v < 0.0 {
                    Err(EvalError::PowDomain { base: v, exponent: c })
                } else {
                    Ok(v.powf(c))
                }
            },
        )
    }

    pub fn sin(&self) -> SmoothMap {
        if let Some(m) = self.symbolic1(Expr::sin) {
            return m;
        }
        self.unary(self.order, |s| Ok(s.sin_cos().0), |v| Ok(v.sin()))
    }

    pub fn cos(&self) -> SmoothMap {
        if let Some(m) = self.symbolic1(Expr::cos) {
            return m;
        }
        self.unary(self.order, |s| Ok(s.sin_cos().1), |v| Ok(v.cos()))
    }

    /// The derivative as a map of its own; declared order drops by one.
    pub fn derivative(&self) -> SmoothMap {
        if let Some(m) = self.symbolic1(|e| crate::expr::differentiate(&e)) {
            return m;
        }
        let a = self.clone();
        let a2 = self.clone();
        SmoothMap::from_parts(
            self.domain,
            self.order.saturating_sub(1),
            self.analytic,
            move |t, k| Ok(a.series(t, k + 1)?.differentiate()),
            move |t| a2.deriv(1, t),
        )
    }

    /// `self ∘ inner`, living on the domain of `inner`.
    pub fn compose(&self, inner: &SmoothMap) -> SmoothMap {
        if let (Some(f), Some(g)) = (self.as_expr(), inner.as_expr()) {
            let e = f.substitute(g);
            if e.node_count() <= SYMBOLIC_LIMIT {
                return SmoothMap::from_expr(e, inner.domain);
            }
        }
        let (f, g) = (self.clone(), inner.clone());
        let (f2, g2) = (self.clone(), inner.clone());
        SmoothMap::from_parts(
            inner.domain,
            self.order.min(inner.order),
            self.analytic && inner.analytic,
            move |t, k| {
                let gs = g.series(t, k)?;
                Ok(f.series(gs.value(), k)?.compose(&gs))
            },
            move |t| f2.value(g2.value(t)?),
        )
    }
}

/// Central-difference estimate of derivatives up to `order`.
///
/// Step `h = eps^(1/(k+2)) * max(1, |t|)`; 5-point stencils for orders 1-2,
/// 7-point stencils for orders 3-4.
fn fd_series(
    f: &(dyn Fn(f64) -> Result<f64, EvalError> + Send + Sync),
    t: f64,
    order: usize,
) -> Result<Series, EvalError> {
    if order > FD_MAX_ORDER {
        return Err(EvalError::OrderExceeded {
            requested: order,
            declared: FD_MAX_ORDER,
        });
    }
    let mut derivs = vec![f(t)?];
    for k in 1..=order {
        derivs.push(fd_derivative(f, k, t)?);
    }
    Ok(Series::from_derivatives(&derivs))
}

pub(crate) fn fd_derivative(
    f: &(dyn Fn(f64) -> Result<f64, EvalError> + Send + Sync),
    k: usize,
    t: f64,
) -> Result<f64, EvalError> {
    let h = f64::EPSILON.powf(1.0 / (k as f64 + 2.0)) * t.abs().max(1.0);
    let at = |j: i32| f(t + j as f64 * h);
    Ok(match k {
        1 => (at(-2)? - 8.0 * at(-1)? + 8.0 * at(1)? - at(2)?) / (12.0 * h),
        2 => (-at(-2)? + 16.0 * at(-1)? - 30.0 * at(0)? + 16.0 * at(1)? - at(2)?) / (12.0 * h * h),
        3 => (at(-3)? - 8.0 * at(-2)? + 13.0 * at(-1)? - 13.0 * at(1)? + 8.0 * at(2)? - at(3)?) / (8.0 * h.powi(3)),
        4 => {
            (-at(-3)? + 12.0 * at(-2)? - 39.0 * at(-1)? + 56.0 * at(0)? - 39.0 * at(1)? + 12.0 * at(2)? - at(3)?)
                / (6.0 * h.powi(4))
        }
        _ => {
            return Err(EvalError::OrderExceeded {
                requested: k,
                declared: FD_MAX_ORDER,
            })
        }
    })
}
