//! Inflections, singular points with their `(n, m)` type, and vertices
//! through a dependency witness.

mod germ;
mod witness;

pub use germ::{
    classify_point, germ_alpha, germ_curvature, germ_curve, AlphaDirection, GermAlpha, NMType, DEFAULT_MAX_ORDER,
    GERM_HALF_WIDTH,
};
pub use witness::{
    applicable_witnesses, default_witness, witness_for, DependencyWitness, WitnessCheck, WitnessProvenance,
};

use crate::error::Result;
use crate::legendre::LegendreCurve;
use crate::numerics::{find_zeros, SmoothMap, Zero, ZeroConfig};

/// `V = k̇1 k2 - k1 k̇2`.
pub fn vertex_function(witness: &DependencyWitness) -> SmoothMap {
    let (k1, k2) = (&witness.k1, &witness.k2);
    k1.derivative().mul(k2).sub(&k1.mul(&k2.derivative()))
}

fn config_for(curve: &LegendreCurve, cfg: &ZeroConfig) -> ZeroConfig {
    ZeroConfig {
        periodic: cfg.periodic || curve.is_closed(),
        ..*cfg
    }
}

/// Zeros of the vertex function of the normalized witness.
pub fn find_vertices(curve: &LegendreCurve, witness: &DependencyWitness, cfg: &ZeroConfig) -> Result<Vec<Zero>> {
    let v = vertex_function(&witness.normalized()?);
    Ok(find_zeros(&v, &config_for(curve, cfg)))
}

/// Zeros of `ℓ`.
pub fn find_inflections(curve: &LegendreCurve, cfg: &ZeroConfig) -> Vec<Zero> {
    find_zeros(&curve.curvature_pair().ell, &config_for(curve, cfg))
}

/// Zeros of `β`.
pub fn find_singularities(curve: &LegendreCurve, cfg: &ZeroConfig) -> Vec<Zero> {
    find_zeros(&curve.curvature_pair().beta, &config_for(curve, cfg))
}

#[derive(Debug, Clone)]
pub struct SingularPoint {
    pub zero: Zero,
    pub nm_type: Option<NMType>,
}

impl SingularPoint {
    pub fn cusp_name(&self) -> Option<String> {
        self.nm_type.and_then(NMType::cusp_name)
    }
}

#[derive(Debug, Clone)]
pub struct EventReport {
    pub inflections: Vec<Zero>,
    pub singularities: Vec<SingularPoint>,
    pub vertices: Vec<Zero>,
    pub witness: WitnessProvenance,
    pub config: ZeroConfig,
}

/// All three event lists for one curve.
pub fn detect_events(curve: &LegendreCurve, witness: &DependencyWitness, cfg: &ZeroConfig) -> Result<EventReport> {
    let cfg = config_for(curve, cfg);
    let singularities = find_singularities(curve, &cfg)
        .into_iter()
        .map(|zero| SingularPoint {
            nm_type: zero
                .is_isolated()
                .then(|| classify_point(curve, zero.location, DEFAULT_MAX_ORDER))
                .flatten(),
            zero,
        })
        .collect();
    Ok(EventReport {
        inflections: find_inflections(curve, &cfg),
        singularities,
        vertices: find_vertices(curve, witness, &cfg)?,
        witness: witness.provenance,
        config: cfg,
    })
}

#[cfg(test)]
mod tests;
