use std::fmt;

use crate::error::{Error, Result};
use crate::evolute::resolve_alpha;
use crate::legendre::{CurvaturePair, LegendreCurve, PlaneMap};
use crate::numerics::{find_zeros, SmoothMap, ZeroConfig};

/// Grid used to check witness invariants.
const WITNESS_GRID: usize = 4096;

/// How a dependency witness was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessProvenance {
    /// `(1, -ℓ/β)`, needs `β` nowhere zero.
    Regular,
    /// `(-β/ℓ, 1)`, needs `ℓ` nowhere zero.
    Front,
    /// `(-α, 1)` with `β = αℓ`.
    Frontal,
    /// `(-β, ℓ)`, needs `(ℓ, β)` nowhere zero.
    Immersion,
    User,
}

impl WitnessProvenance {
    pub const ALL: [WitnessProvenance; 5] = [
        WitnessProvenance::Regular,
        WitnessProvenance::Front,
        WitnessProvenance::Frontal,
        WitnessProvenance::Immersion,
        WitnessProvenance::User,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WitnessProvenance::Regular => "regular",
            WitnessProvenance::Front => "front",
            WitnessProvenance::Frontal => "frontal",
            WitnessProvenance::Immersion => "immersion",
            WitnessProvenance::User => "user",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }
}

impl fmt::Display for WitnessProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Nowhere-zero `(k1, k2)` with `k1 ℓ + k2 β = 0`.
#[derive(Debug, Clone)]
pub struct DependencyWitness {
    pub k1: SmoothMap,
    pub k2: SmoothMap,
    pub provenance: WitnessProvenance,
}

/// Measured witness invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessCheck {
    /// `sup |k1 ℓ + k2 β|`.
    pub residual: f64,
    /// `1e-7 (1 + sup|ℓ| + sup|β|)`.
    pub tolerance: f64,
    pub min_norm: f64,
    pub max_norm: f64,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance && self.min_norm > 1e-9 * self.max_norm.max(1e-300)
    }
}

impl DependencyWitness {
    pub fn new(k1: SmoothMap, k2: SmoothMap, provenance: WitnessProvenance) -> Self {
        DependencyWitness { k1, k2, provenance }
    }

    /// Witness checked against the curve.
    pub fn checked(curve: &LegendreCurve, k1: SmoothMap, k2: SmoothMap, provenance: WitnessProvenance) -> Result<Self> {
        let w = DependencyWitness::new(k1, k2, provenance);
        w.validate(curve)?;
        Ok(w)
    }

    pub fn check(&self, c: &CurvaturePair) -> Result<WitnessCheck> {
        let d = c.domain();
        let (mut residual, mut sup_l, mut sup_b) = (0.0f64, 0.0f64, 0.0f64);
        let (mut min_norm, mut max_norm) = (f64::INFINITY, 0.0f64);
        for t in d.grid(WITNESS_GRID) {
            let (l, b) = (c.ell.value(t)?, c.beta.value(t)?);
            let (a, q) = (self.k1.value(t)?, self.k2.value(t)?);
            residual = residual.max((a * l + q * b).abs());
            sup_l = sup_l.max(l.abs());
            sup_b = sup_b.max(b.abs());
            let n = a.hypot(q);
            min_norm = min_norm.min(n);
            max_norm = max_norm.max(n);
        }
        Ok(WitnessCheck {
            residual,
            tolerance: 1e-7 * (1.0 + sup_l + sup_b),
            min_norm,
            max_norm,
        })
    }

    pub fn validate(&self, curve: &LegendreCurve) -> Result<WitnessCheck> {
        let check = self.check(&curve.curvature_pair())?;
        if check.min_norm <= 1e-9 * check.max_norm.max(1e-300) {
            return Err(Error::WitnessInvalid(format!(
                "(k1, k2) nearly vanishes: min |k| = {:e}",
                check.min_norm
            )));
        }
        if check.residual > check.tolerance {
            return Err(Error::WitnessInvalid(format!(
                "sup |k1 ℓ + k2 β| = {:e} exceeds {:e}",
                check.residual, check.tolerance
            )));
        }
        Ok(check)
    }

    /// Sampled `max |k|`.
    pub fn max_norm(&self) -> Result<f64> {
        let mut m = 0.0f64;
        for t in self.k1.domain().grid(WITNESS_GRID) {
            m = m.max(self.k1.value(t)?.hypot(self.k2.value(t)?));
        }
        Ok(m)
    }

    /// `(c k1, c k2)`.
    pub fn scaled(&self, c: f64) -> Self {
        DependencyWitness::new(self.k1.scale(c), self.k2.scale(c), self.provenance)
    }

    /// Divided by the sampled `max |k|`.
    pub fn normalized(&self) -> Result<Self> {
        let m = self.max_norm()?;
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::WitnessInvalid(format!("max |k| = {m}")));
        }
        Ok(self.scaled(1.0 / m))
    }

    /// For the parallel curve `γ + λν`.
    pub fn parallel(&self, lambda: f64) -> Self {
        DependencyWitness::new(self.k1.sub(&self.k2.scale(lambda)), self.k2.clone(), self.provenance)
    }

    /// For the curvature `(ℓ + λβ, β)`.
    pub fn shear(&self, lambda: f64) -> Self {
        DependencyWitness::new(self.k1.clone(), self.k2.sub(&self.k1.scale(lambda)), self.provenance)
    }

    /// For the curvature `A (ℓ, β)ᵗ`: `(a22 k1 - a21 k2, -a12 k1 + a11 k2)`.
    pub fn linear(&self, a: [[f64; 2]; 2]) -> Self {
        DependencyWitness::new(
            self.k1.scale(a[1][1]).sub(&self.k2.scale(a[1][0])),
            self.k2.scale(a[0][0]).sub(&self.k1.scale(a[0][1])),
            self.provenance,
        )
    }

    /// For `ν ↦ -ν`, which sends `(ℓ, β)` to `(ℓ, -β)`.
    pub fn flip_normal(&self) -> Self {
        DependencyWitness::new(self.k1.clone(), self.k2.neg(), self.provenance)
    }

    /// For the swap `(x, y) ↦ (y, x)`, which sends `(ℓ, β)` to `(-ℓ, β)`.
    pub fn swap(&self) -> Self {
        DependencyWitness::new(self.k1.neg(), self.k2.clone(), self.provenance)
    }

    /// For the image under `p ↦ A p + c`, whose curvature is
    /// `(det A ℓ/|ν̄|², |ν̄| β)`: `(k1 |ν̄|²/det A, k2/|ν̄|)`.
    pub fn affine(&self, nu: &PlaneMap, a: [[f64; 2]; 2]) -> Self {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let bx = nu.x.scale(a[1][1]).sub(&nu.y.scale(a[1][0]));
        let by = nu.y.scale(a[0][0]).sub(&nu.x.scale(a[0][1]));
        let sq = bx.mul(&bx).add(&by.mul(&by));
        DependencyWitness::new(
            self.k1.mul(&sq).scale(1.0 / det),
            self.k2.div(&sq.sqrt()),
            self.provenance,
        )
    }

    /// `(k1 ∘ s, k2 ∘ s)`.
    pub fn reparametrize(&self, s: &SmoothMap) -> Self {
        DependencyWitness::new(self.k1.compose(s), self.k2.compose(s), self.provenance)
    }
}

fn zero_free(f: &SmoothMap, periodic: bool) -> Result<bool> {
    let grid = f.domain().grid(WITNESS_GRID);
    let mut sup = 0.0f64;
    let mut min = f64::INFINITY;
    for &t in &grid {
        let v = f.value(t)?.abs();
        sup = sup.max(v);
        min = min.min(v);
    }
    Ok(min > 1e-6 * (1.0 + sup) && find_zeros(f, &ZeroConfig::periodic(periodic)).is_empty())
}

/// One witness for the given construction, if it applies.
pub fn witness_for(curve: &LegendreCurve, provenance: WitnessProvenance) -> Result<DependencyWitness> {
    let c = curve.curvature_pair();
    let d = curve.domain();
    let one = SmoothMap::constant(1.0, d);
    let periodic = curve.is_closed();
    let w = match provenance {
        WitnessProvenance::Regular => {
            if !zero_free(&c.beta, periodic)? {
                return Err(Error::WitnessUnavailable("β vanishes, the curve is not regular".into()));
            }
            DependencyWitness::new(one, c.ell.div(&c.beta).neg(), provenance)
        }
        WitnessProvenance::Front => {
            if !zero_free(&c.ell, periodic)? {
                return Err(Error::WitnessUnavailable(
                    "ℓ vanishes, the curve has inflections".into(),
                ));
            }
            DependencyWitness::new(c.beta.div(&c.ell).neg(), one, provenance)
        }
        WitnessProvenance::Frontal => {
            let alpha = resolve_alpha(curve)
                .into_result()
                .map_err(|e| Error::WitnessUnavailable(e.to_string()))?;
            DependencyWitness::new(alpha.neg(), one, provenance)
        }
        WitnessProvenance::Immersion => {
            if !curve.is_immersion()?.holds() {
                return Err(Error::WitnessUnavailable("ℓ and β vanish together".into()));
            }
            DependencyWitness::new(c.beta.neg(), c.ell.clone(), provenance)
        }
        WitnessProvenance::User => {
            return Err(Error::WitnessUnavailable("a user witness needs explicit k1, k2".into()));
        }
    };
    w.validate(curve)?;
    Ok(w)
}

/// First applicable construction among regular, front, frontal, immersion.
pub fn default_witness(curve: &LegendreCurve) -> Result<DependencyWitness> {
    let mut reasons = Vec::new();
    for p in &WitnessProvenance::ALL[..4] {
        match witness_for(curve, *p) {
            Ok(w) => return Ok(w),
            Err(e) => reasons.push(format!("{p}: {e}")),
        }
    }
    Err(Error::WitnessUnavailable(format!(
        "no construction applies ({}); supply k1, k2",
        reasons.join("; ")
    )))
}

/// Every construction that applies to the curve.
pub fn applicable_witnesses(curve: &LegendreCurve) -> Vec<DependencyWitness> {
    WitnessProvenance::ALL[..4]
        .iter()
        .filter_map(|p| witness_for(curve, *p).ok())
        .collect()
}
