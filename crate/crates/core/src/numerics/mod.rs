//! Taylor series, smooth maps, root finding and quadrature.

mod hermite;
mod quad;
pub mod series;
mod smooth;
mod zeros;

pub use hermite::QuinticHermite;
pub use quad::{integrate, integrate_fn, Antiderivative, QUAD_TOL};
pub use series::Series;
pub use smooth::{Interval, SeriesFn, SmoothMap, EXPR_ORDER, FD_MAX_ORDER};
pub use zeros::{find_zeros, refine_bracket, vanishing_order, Zero, ZeroConfig, ZeroKind, DEFAULT_GRID};

/// `k`-th derivative of `f` at `t`.
pub fn deriv(f: &SmoothMap, k: usize, t: f64) -> crate::Result<f64> {
    Ok(f.deriv(k, t)?)
}
