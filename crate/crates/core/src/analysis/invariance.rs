use std::f64::consts::TAU;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::events::{default_witness, find_singularities, find_vertices, DependencyWitness};
use crate::legendre::{CurvatureSamples, LegendreCurve, PlaneDiffeo};
use crate::numerics::{Interval, SmoothMap, ZeroConfig};

/// Points compared in the round-trip curvature check.
const GATE_POINTS: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceConfig {
    pub seed: u64,
    pub affine_maps: usize,
    pub parallels: Vec<f64>,
    pub shears: Vec<f64>,
    pub linear_maps: usize,
    pub reparametrize: bool,
    /// Allowed displacement of a vertex.
    pub tol: f64,
    /// Allowed round-trip curvature error of a reconstructed curve.
    pub gate: f64,
    pub reconstruct_steps: usize,
}

impl Default for InvarianceConfig {
    fn default() -> Self {
        InvarianceConfig {
            seed: 20_240_917,
            affine_maps: 20,
            parallels: vec![-1.0, -0.3, 0.2, 0.5, 1.0],
            shears: vec![-0.5, 0.5],
            linear_maps: 10,
            reparametrize: true,
            tol: 1e-6,
            gate: 1e-6,
            reconstruct_steps: 50_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformFamily {
    Affine,
    Swap,
    FlipNormal,
    Parallel,
    Reparametrize,
    Shear,
    Linear,
}

impl TransformFamily {
    pub fn name(self) -> &'static str {
        match self {
            TransformFamily::Affine => "affine",
            TransformFamily::Swap => "swap",
            TransformFamily::FlipNormal => "flip-normal",
            TransformFamily::Parallel => "parallel",
            TransformFamily::Reparametrize => "reparametrize",
            TransformFamily::Shear => "shear",
            TransformFamily::Linear => "gl2",
        }
    }
}

impl fmt::Display for TransformFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceCheck {
    pub family: TransformFamily,
    pub label: String,
    pub passed: bool,
    /// Largest vertex displacement, or the gate error when the gate failed.
    pub deviation: f64,
    /// Number of vertices compared.
    pub compared: usize,
    /// Round-trip curvature error for reconstructed curves.
    pub gate_error: Option<f64>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub curve: String,
    pub checks: Vec<InvarianceCheck>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvarianceCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn circle_dist(a: f64, b: f64, period: Option<f64>) -> f64 {
    match period {
        Some(p) => {
            let h = (a - b).rem_euclid(p);
            h.min(p - h)
        }
        None => (a - b).abs(),
    }
}

/// Greedy matching of two sorted point sets; `None` when the counts differ.
fn max_displacement(want: &[f64], got: &[f64], period: Option<f64>) -> Option<f64> {
    if want.len() != got.len() {
        return None;
    }
    let mut used = vec![false; got.len()];
    let mut worst = 0.0f64;
    for &w in want {
        let (j, d) = got
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &g)| (j, circle_dist(w, g, period)))
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

/// Random matrix with entries in `[-2, 2]` and `|det|` in `[0.5, 2]`.
fn random_matrix(rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
    loop {
        let a = [
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
        ];
        let det: f64 = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if (0.5..=2.0).contains(&det.abs()) {
            return a;
        }
    }
}

struct Context<'a> {
    curve: &'a LegendreCurve,
    witness: &'a DependencyWitness,
    cfg: ZeroConfig,
    period: Option<f64>,
    vertices: Vec<f64>,
    tol: f64,
}

impl Context<'_> {
    /// The transformed curve's own default witness when it applies, else the
    /// matched witness if it is valid there.
    fn witness_on(&self, curve: &LegendreCurve, matched: DependencyWitness) -> Result<DependencyWitness> {
        match default_witness(curve) {
            Ok(w) => Ok(w),
            Err(_) => {
                matched.validate(curve)?;
                Ok(matched)
            }
        }
    }

    fn vertices_of(&self, curve: &LegendreCurve, w: &DependencyWitness) -> Result<Vec<f64>> {
        Ok(find_vertices(curve, w, &self.cfg)?
            .into_iter()
            .map(|z| z.location)
            .collect())
    }

    fn compare(&self, family: TransformFamily, label: String, want: &[f64], got: Result<Vec<f64>>) -> InvarianceCheck {
        let mut check = InvarianceCheck {
            family,
            label,
            passed: false,
            deviation: f64::INFINITY,
            compared: want.len(),
            gate_error: None,
            detail: None,
        };
        match got {
            Err(e) => check.detail = Some(e.to_string()),
            Ok(got) => match max_displacement(want, &got, self.period) {
                Some(d) => {
                    check.deviation = d;
                    check.passed = d <= self.tol;
                    if !check.passed {
                        check.detail = Some(format!("vertex moved by {d:e}"));
                    }
                }
                None => check.detail = Some(format!("{} vertices, expected {}", got.len(), want.len())),
            },
        }
        check
    }

    fn direct(
        &self,
        family: TransformFamily,
        label: String,
        image: Result<(LegendreCurve, DependencyWitness)>,
    ) -> InvarianceCheck {
        let got = image.and_then(|(c, matched)| {
            let w = self.witness_on(&c, matched)?;
            self.vertices_of(&c, &w)
        });
        self.compare(family, label, &self.vertices, got)
    }

    /// Vertices that are also singular points, on the curve and its image.
    fn singular_vertices(&self, curve: &LegendreCurve, vertices: &[f64]) -> Vec<f64> {
        let sing = find_singularities(curve, &self.cfg);
        vertices
            .iter()
            .copied()
            .filter(|v| {
                sing.iter()
                    .any(|s| circle_dist(s.location, *v, self.period) <= self.tol)
            })
            .collect()
    }

    fn affine(&self, a: [[f64; 2]; 2], shift: [f64; 2]) -> InvarianceCheck {
        let label = format!("A = {a:?}, c = {shift:?}");
        let want = self.singular_vertices(self.curve, &self.vertices);
        let got = (|| {
            let image = self.curve.push_forward(&PlaneDiffeo::Affine { a, shift })?;
            let w = self.witness.affine(&self.curve.nu, a);
            w.validate(&image)?;
            let v = self.vertices_of(&image, &w)?;
            Ok(self.singular_vertices(&image, &v))
        })();
        self.compare(TransformFamily::Affine, label, &want, got)
    }

    fn reparametrize(&self) -> InvarianceCheck {
        let d = self.curve.domain();
        let u = SmoothMap::identity(Interval::new(0.0, TAU));
        let s = u.add(&u.sin().scale(0.1)).scale(d.len() / TAU).add_scalar(d.a);
        let got = (|| {
            let image = self.curve.reparametrize(&s)?;
            let w = self.witness_on(&image, self.witness.reparametrize(&s))?;
            self.vertices_of(&image, &w)?
                .into_iter()
                .map(|u| Ok(s.value(u)?))
                .collect::<Result<Vec<f64>>>()
        })();
        self.compare(
            TransformFamily::Reparametrize,
            "s(u) = u + 0.1 sin u".into(),
            &self.vertices,
            got,
        )
    }

    /// Rebuilds the curve from `A (ℓ, β)` and compares vertices, after a
    /// gate on the reconstructed curvature.
    fn reconstructed(
        &self,
        samples: &CurvatureSamples,
        family: TransformFamily,
        a: [[f64; 2]; 2],
        label: String,
        gate: f64,
    ) -> InvarianceCheck {
        let run = || -> Result<(f64, Vec<f64>)> {
            let d = self.curve.domain();
            let mut image = samples.linear(a).reconstruct(
                self.curve.gamma.value(d.a)?,
                self.curve.nu.value(d.a)?,
                label.clone(),
            )?;
            image.closed = self.curve.closed;
            let want = self.curve.curvature_pair().linear(a);
            let got = image.curvature_pair();
            let (mut err, mut scale) = (0.0f64, 0.0f64);
            let h = d.len() / GATE_POINTS as f64;
            // offset from the interpolation nodes
            for t in (0..GATE_POINTS).map(|i| d.a + (i as f64 + 0.37) * h) {
                let (l, b) = (want.ell.value(t)?, want.beta.value(t)?);
                err = err
                    .max((got.ell.value(t)? - l).abs())
                    .max((got.beta.value(t)? - b).abs());
                scale = scale.max(l.abs()).max(b.abs());
            }
            let err = err / (1.0 + scale);
            if err > gate {
                return Ok((err, Vec::new()));
            }
            let w = self.witness.linear(a);
            w.validate(&image)?;
            Ok((err, self.vertices_of(&image, &w)?))
        };
        match run() {
            Ok((err, got)) if err > gate => InvarianceCheck {
                family,
                label,
                passed: false,
                deviation: err,
                compared: got.len(),
                gate_error: Some(err),
                detail: Some(format!("round-trip curvature error {err:e} exceeds {gate:e}")),
            },
            Ok((err, got)) => {
                let mut c = self.compare(family, label, &self.vertices, Ok(got));
                c.gate_error = Some(err);
                c
            }
            Err(e) => self.compare(family, label, &self.vertices, Err(e)),
        }
    }
}

/// Checks that vertices move with the curve under each transform family.
pub fn verify_invariance(
    curve: &LegendreCurve,
    witness: &DependencyWitness,
    cfg: &InvarianceConfig,
) -> Result<InvarianceReport> {
    if !curve.is_closed() {
        return Err(Error::Hypothesis(format!("{} is not closed", curve.label)));
    }
    let zc = ZeroConfig::periodic(true);
    let ctx = Context {
        curve,
        witness,
        vertices: find_vertices(curve, witness, &zc)?
            .into_iter()
            .map(|z| z.location)
            .collect(),
        cfg: zc,
        period: Some(curve.domain().len()),
        tol: cfg.tol,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();

    for _ in 0..cfg.affine_maps {
        let a = random_matrix(&mut rng);
        let shift = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        checks.push(ctx.affine(a, shift));
    }
    let swap = curve.push_forward(&PlaneDiffeo::Swap).map(|c| (c, witness.swap()));
    checks.push(ctx.direct(TransformFamily::Swap, "(x, y) -> (y, x)".into(), swap));
    checks.push(ctx.direct(
        TransformFamily::FlipNormal,
        "ν -> -ν".into(),
        Ok((curve.flip_normal(), witness.flip_normal())),
    ));
    for &lambda in &cfg.parallels {
        checks.push(ctx.direct(
            TransformFamily::Parallel,
            format!("λ = {lambda}"),
            Ok((curve.parallel(lambda), witness.parallel(lambda))),
        ));
    }
    if cfg.reparametrize {
        checks.push(ctx.reparametrize());
    }

    let mut linear: Vec<(TransformFamily, [[f64; 2]; 2], String)> = cfg
        .shears
        .iter()
        .map(|&l| {
            (
                TransformFamily::Shear,
                [[1.0, l], [0.0, 1.0]],
                format!("(ℓ + {l} β, β)"),
            )
        })
        .collect();
    for _ in 0..cfg.linear_maps {
        let a = random_matrix(&mut rng);
        linear.push((TransformFamily::Linear, a, format!("A = {a:?}")));
    }
    if !linear.is_empty() {
        let samples = CurvatureSamples::sample_with(&curve.curvature_pair(), curve.domain(), cfg.reconstruct_steps)?;
        for (family, a, label) in linear {
            checks.push(ctx.reconstructed(&samples, family, a, label, cfg.gate));
        }
    }
    Ok(InvarianceReport {
        curve: curve.label.clone(),
        checks,
    })
}
