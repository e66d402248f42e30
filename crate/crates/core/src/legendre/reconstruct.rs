use super::{Closedness, CurvaturePair, LegendreCurve, PlaneMap};
use crate::error::{Error, Result};
use crate::numerics::{Interval, QuinticHermite};

/// Fixed number of integration steps over the whole domain.
pub const RECONSTRUCT_STEPS: usize = 200_000;

/// Interpolation nodes are kept every `NODE_STRIDE` steps.
const NODE_STRIDE: usize = 10;

/// `(ℓ, β)` sampled on the half-step grid of the integrator, with `ℓ'`, `β'`
/// at the interpolation nodes. Linear images of a pair can be formed from
/// the samples without re-evaluating the maps.
#[derive(Debug, Clone)]
pub struct CurvatureSamples {
    domain: Interval,
    steps: usize,
    ell: Vec<f64>,
    beta: Vec<f64>,
    dell: Vec<f64>,
    dbeta: Vec<f64>,
}

impl CurvatureSamples {
    pub fn sample(c: &CurvaturePair, domain: Interval) -> Result<Self> {
        Self::sample_with(c, domain, RECONSTRUCT_STEPS)
    }

    pub fn sample_with(c: &CurvaturePair, domain: Interval, steps: usize) -> Result<Self> {
        let steps = steps.div_ceil(NODE_STRIDE) * NODE_STRIDE;
        let half = domain.len() / (2 * steps) as f64;
        let mut ell = Vec::with_capacity(2 * steps + 1);
        let mut beta = Vec::with_capacity(2 * steps + 1);
        for j in 0..=2 * steps {
            let t = if j == 2 * steps {
                domain.b
            } else {
                domain.a + j as f64 * half
            };
            ell.push(c.ell.value(t)?);
            beta.push(c.beta.value(t)?);
        }
        let nodes = steps / NODE_STRIDE;
        let mut dell = Vec::with_capacity(nodes + 1);
        let mut dbeta = Vec::with_capacity(nodes + 1);
        for t in domain.grid(nodes) {
            dell.push(c.ell.deriv(1, t)?);
            dbeta.push(c.beta.deriv(1, t)?);
        }
        Ok(CurvatureSamples {
            domain,
            steps,
            ell,
            beta,
            dell,
            dbeta,
        })
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Samples of `(a11 ℓ + a12 β, a21 ℓ + a22 β)`.
    pub fn linear(&self, a: [[f64; 2]; 2]) -> CurvatureSamples {
        let mix = |p: &[f64], q: &[f64], r: [f64; 2]| -> Vec<f64> {
            p.iter().zip(q).map(|(x, y)| r[0] * x + r[1] * y).collect()
        };
        CurvatureSamples {
            domain: self.domain,
            steps: self.steps,
            ell: mix(&self.ell, &self.beta, a[0]),
            beta: mix(&self.ell, &self.beta, a[1]),
            dell: mix(&self.dell, &self.dbeta, a[0]),
            dbeta: mix(&self.dell, &self.dbeta, a[1]),
        }
    }

    /// Integrate the Frenet system `ν̇ = ℓμ, μ̇ = -ℓν, γ̇ = βμ` by classical
    /// RK4, renormalizing `ν` after every step.
    pub fn reconstruct(&self, gamma0: [f64; 2], nu0: [f64; 2], label: impl Into<String>) -> Result<LegendreCurve> {
        let norm = nu0[0].hypot(nu0[1]);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("initial normal has length {norm}")));
        }
        let h = self.domain.len() / self.steps as f64;
        let nodes = self.steps / NODE_STRIDE;
        let mut data: Vec<Vec<f64>> = (0..12).map(|_| Vec::with_capacity(nodes + 1)).collect();
        let mut g = gamma0;
        let mut carry = [0.0f64; 2];
        let mut n = nu0;
        let rhs = |l: f64, b: f64, n: [f64; 2]| -> [f64; 4] {
            // μ = Jν = (-n1, n0)
            let mu = [-n[1], n[0]];
            [b * mu[0], b * mu[1], l * mu[0], l * mu[1]]
        };
        let push = |data: &mut Vec<Vec<f64>>, g: [f64; 2], n: [f64; 2], l: f64, b: f64, dl: f64, db: f64| {
            let mu = [-n[1], n[0]];
            for i in 0..2 {
                data[i].push(g[i]);
                data[2 + i].push(b * mu[i]);
                data[4 + i].push(db * mu[i] - b * l * n[i]);
                data[6 + i].push(n[i]);
                data[8 + i].push(l * mu[i]);
                data[10 + i].push(dl * mu[i] - l * l * n[i]);
            }
        };
        for s in 0..self.steps {
            if s % NODE_STRIDE == 0 {
                let k = s / NODE_STRIDE;
                push(
                    &mut data,
                    g,
                    n,
                    self.ell[2 * s],
                    self.beta[2 * s],
                    self.dell[k],
                    self.dbeta[k],
                );
            }
            let (l0, l1, l2) = (self.ell[2 * s], self.ell[2 * s + 1], self.ell[2 * s + 2]);
            let (b0, b1, b2) = (self.beta[2 * s], self.beta[2 * s + 1], self.beta[2 * s + 2]);
            let k1 = rhs(l0, b0, n);
            let n2 = [n[0] + 0.5 * h * k1[2], n[1] + 0.5 * h * k1[3]];
            let k2 = rhs(l1, b1, n2);
            let n3 = [n[0] + 0.5 * h * k2[2], n[1] + 0.5 * h * k2[3]];
            let k3 = rhs(l1, b1, n3);
            let n4 = [n[0] + h * k3[2], n[1] + h * k3[3]];
            let k4 = rhs(l2, b2, n4);
            let inc = |i: usize| h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            // compensated summation keeps roundoff from piling up over the steps
            for i in 0..2 {
                let y = inc(i) - carry[i];
                let sum = g[i] + y;
                carry[i] = (sum - g[i]) - y;
                g[i] = sum;
            }
            n = [n[0] + inc(2), n[1] + inc(3)];
            let r = n[0].hypot(n[1]);
            n = [n[0] / r, n[1] / r];
        }
        let last = 2 * self.steps;
        push(
            &mut data,
            g,
            n,
            self.ell[last],
            self.beta[last],
            self.dell[nodes],
            self.dbeta[nodes],
        );

        let d = self.domain;
        let map = |i: usize| QuinticHermite::new(d, &data[i], &data[i + 2], &data[i + 4]).into_map(d, 3);
        let gamma = PlaneMap::new(map(0), map(1));
        let nu = PlaneMap::new(map(6), map(7));
        Ok(LegendreCurve::new(gamma, nu, Closedness::Open, label))
    }
}

/// Legendre curve with prescribed curvature `(ℓ, β)` and initial frame.
pub fn reconstruct(c: &CurvaturePair, gamma0: [f64; 2], nu0: [f64; 2], domain: Interval) -> Result<LegendreCurve> {
    CurvatureSamples::sample(c, domain)?.reconstruct(gamma0, nu0, "reconstructed")
}
