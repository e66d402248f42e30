use std::fmt;
use std::sync::Arc;

use super::PlaneMap;
use crate::numerics::{Series, SmoothMap};

/// Value, Jacobian and second partials of `Φ = (φ1, φ2)` at a point.
///
/// `jac[i] = [φi_x, φi_y]`, `hess[i] = [φi_xx, φi_xy, φi_yy]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffeoJet {
    pub value: [f64; 2],
    pub jac: [[f64; 2]; 2],
    pub hess: [[f64; 3]; 2],
}

impl DiffeoJet {
    pub fn det(&self) -> f64 {
        self.jac[0][0] * self.jac[1][1] - self.jac[1][0] * self.jac[0][1]
    }

    /// `ν̄ = (φ2y a - φ2x b, -φ1y a + φ1x b)` for `ν = (a, b)`.
    pub fn nu_bar(&self, nu: [f64; 2]) -> [f64; 2] {
        let [a, b] = nu;
        let j = &self.jac;
        [j[1][1] * a - j[1][0] * b, -j[0][1] * a + j[0][0] * b]
    }
}

type JetFn = Arc<dyn Fn([f64; 2]) -> DiffeoJet + Send + Sync>;

/// A diffeomorphism of the plane.
#[derive(Clone)]
pub enum PlaneDiffeo {
    /// `p -> A p + shift`.
    Affine { a: [[f64; 2]; 2], shift: [f64; 2] },
    /// `(x, y) -> (y, x)`.
    Swap,
    /// User-supplied map with partials up to order two.
    General { jet: JetFn, label: String },
}

impl fmt::Debug for PlaneDiffeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaneDiffeo::Affine { a, shift } => write!(f, "Affine({a:?}, {shift:?})"),
            PlaneDiffeo::Swap => write!(f, "Swap"),
            PlaneDiffeo::General { label, .. } => write!(f, "General({label})"),
        }
    }
}

impl PlaneDiffeo {
    pub fn linear(a: [[f64; 2]; 2]) -> Self {
        PlaneDiffeo::Affine { a, shift: [0.0, 0.0] }
    }

    pub fn identity() -> Self {
        Self::linear([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn general<F>(label: impl Into<String>, jet: F) -> Self
    where
        F: Fn([f64; 2]) -> DiffeoJet + Send + Sync + 'static,
    {
        PlaneDiffeo::General {
            jet: Arc::new(jet),
            label: label.into(),
        }
    }

    pub fn jet(&self, p: [f64; 2]) -> DiffeoJet {
        match self {
            PlaneDiffeo::Affine { a, shift } => DiffeoJet {
                value: [
                    a[0][0] * p[0] + a[0][1] * p[1] + shift[0],
                    a[1][0] * p[0] + a[1][1] * p[1] + shift[1],
                ],
                jac: *a,
                hess: [[0.0; 3]; 2],
            },
            PlaneDiffeo::Swap => DiffeoJet {
                value: [p[1], p[0]],
                jac: [[0.0, 1.0], [1.0, 0.0]],
                hess: [[0.0; 3]; 2],
            },
            PlaneDiffeo::General { jet, .. } => jet(p),
        }
    }

    /// Inverse of an affine map or the swap; `None` for general maps.
    pub fn inverse(&self) -> Option<PlaneDiffeo> {
        match self {
            PlaneDiffeo::Affine { a, shift } => {
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                if det == 0.0 {
                    return None;
                }
                let inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
                let s = [
                    -(inv[0][0] * shift[0] + inv[0][1] * shift[1]),
                    -(inv[1][0] * shift[0] + inv[1][1] * shift[1]),
                ];
                Some(PlaneDiffeo::Affine { a: inv, shift: s })
            }
            PlaneDiffeo::Swap => Some(PlaneDiffeo::Swap),
            PlaneDiffeo::General { .. } => None,
        }
    }

    /// Image `(Φ ∘ γ, ν̄/|ν̄|)`.
    pub(super) fn apply(&self, gamma: &PlaneMap, nu: &PlaneMap) -> (PlaneMap, PlaneMap) {
        match self {
            PlaneDiffeo::Affine { a, shift } => {
                let lin = |m: &PlaneMap, r: [f64; 2]| m.x.scale(r[0]).add(&m.y.scale(r[1]));
                let g = PlaneMap::new(
                    lin(gamma, a[0]).add_scalar(shift[0]),
                    lin(gamma, a[1]).add_scalar(shift[1]),
                );
                let nb = PlaneMap::new(lin(nu, [a[1][1], -a[1][0]]), lin(nu, [-a[0][1], a[0][0]]));
                (g, nb.normalized())
            }
            PlaneDiffeo::Swap => (
                PlaneMap::new(gamma.y.clone(), gamma.x.clone()),
                PlaneMap::new(nu.y.neg(), nu.x.neg()),
            ),
            PlaneDiffeo::General { jet, .. } => general_apply(jet.clone(), gamma, nu),
        }
    }
}

fn general_apply(jet: JetFn, gamma: &PlaneMap, nu: &PlaneMap) -> (PlaneMap, PlaneMap) {
    let d = gamma.domain();
    let g_order = 2.min(gamma.declared_order());
    let n_order = 1.min(nu.declared_order()).min(g_order);
    let comp = |i: usize| {
        let (gm, jet) = (gamma.clone(), jet.clone());
        SmoothMap::from_series(d, g_order, true, move |t, k| {
            let gx = gm.x.series(t, k)?;
            let gy = gm.y.series(t, k)?;
            let j = jet([gx.value(), gy.value()]);
            let c = |s: &Series, m: usize| s.coeffs().get(m).copied().unwrap_or(0.0);
            let mut out = vec![j.value[i]];
            if k >= 1 {
                out.push(j.jac[i][0] * c(&gx, 1) + j.jac[i][1] * c(&gy, 1));
            }
            if k >= 2 {
                let (u, v) = (c(&gx, 1), c(&gy, 1));
                let h = j.hess[i];
                let quad = h[0] * u * u + 2.0 * h[1] * u * v + h[2] * v * v;
                out.push(j.jac[i][0] * c(&gx, 2) + j.jac[i][1] * c(&gy, 2) + 0.5 * quad);
            }
            Ok(Series(out.into()))
        })
    };
    let g = PlaneMap::new(comp(0), comp(1));
    let nbar = |i: usize| {
        let (gm, nm, jet) = (gamma.clone(), nu.clone(), jet.clone());
        SmoothMap::from_series(d, n_order, true, move |t, k| {
            let gx = gm.x.series(t, k)?;
            let gy = gm.y.series(t, k)?;
            let a = nm.x.series(t, k)?;
            let b = nm.y.series(t, k)?;
            let j = jet([gx.value(), gy.value()]);
            // Jacobian entries as series in t, to first order
            let entry = |r: usize, col: usize| -> Series {
                let mut c = vec![j.jac[r][col]];
                if k >= 1 {
                    let (u, v) = (gx.derivative_value(1), gy.derivative_value(1));
                    let h = j.hess[r];
                    c.push(if col == 0 {
                        h[0] * u + h[1] * v
                    } else {
                        h[1] * u + h[2] * v
                    });
                }
                Series(c.into())
            };
            Ok(if i == 0 {
                &entry(1, 1) * &a - &entry(1, 0) * &b
            } else {
                &entry(0, 0) * &b - &entry(0, 1) * &a
            })
        })
    };
    let nb = PlaneMap::new(nbar(0), nbar(1));
    (g, nb.normalized())
}
