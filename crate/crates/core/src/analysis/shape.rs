use std::fmt;

use crate::error::{Error, Result};
use crate::legendre::LegendreCurve;
use crate::numerics::{find_zeros, ZeroConfig};

/// Default number of polyline samples for the simplicity test.
pub const SIMPLE_RESOLUTION: usize = 8192;

/// Each coarse segment is split this many times for near-miss re-tests.
const REFINE: usize = 8;

/// A pair of crossing segments, by their parameter ranges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub s: f64,
    pub t: f64,
    pub point: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplicityReport {
    pub simple: bool,
    pub crossing: Option<Crossing>,
    pub resolution: usize,
}

type P = [f64; 2];

fn cross(o: P, a: P, b: P) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn on_segment(p: P, a: P, b: P) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Closed segments `[p1, p2]` and `[q1, q2]` meet, up to a length-relative
/// slack `eps`.
fn segments_meet(p1: P, p2: P, q1: P, q2: P, eps: f64) -> Option<P> {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    let sgn = |x: f64| {
        if x > eps {
            1
        } else if x < -eps {
            -1
        } else {
            0
        }
    };
    let (s1, s2, s3, s4) = (sgn(d1), sgn(d2), sgn(d3), sgn(d4));
    if s1 * s2 < 0 && s3 * s4 < 0 {
        let u = d1 / (d1 - d2);
        return Some([p1[0] + u * (p2[0] - p1[0]), p1[1] + u * (p2[1] - p1[1])]);
    }
    if s1 == 0 && on_segment(p1, q1, q2) {
        return Some(p1);
    }
    if s2 == 0 && on_segment(p2, q1, q2) {
        return Some(p2);
    }
    if s3 == 0 && on_segment(q1, p1, p2) {
        return Some(q1);
    }
    if s4 == 0 && on_segment(q2, p1, p2) {
        return Some(q2);
    }
    None
}

fn point_segment_dist(p: P, a: P, b: P) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let u = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - u * dx).hypot(p[1] - a[1] - u * dy)
}

fn segment_dist(p1: P, p2: P, q1: P, q2: P) -> f64 {
    point_segment_dist(p1, q1, q2)
        .min(point_segment_dist(p2, q1, q2))
        .min(point_segment_dist(q1, p1, p2))
        .min(point_segment_dist(q2, p1, p2))
}

/// Whether the closed frontal has no self-intersections apart from the
/// identified endpoints.
///
/// Non-adjacent segment pairs of a polyline are tested; pairs closer than
/// ten segment lengths that do not meet are re-tested on an eight times finer
/// polyline.
pub fn is_simple_closed(curve: &LegendreCurve, resolution: usize) -> Result<SimplicityReport> {
    if !curve.is_closed() {
        return Err(Error::Hypothesis(format!("{} is not closed", curve.label)));
    }
    let n = resolution.max(8);
    let d = curve.domain();
    let fine = curve.polyline(n * REFINE)?;
    let coarse: Vec<P> = (0..=n).map(|i| fine[i * REFINE]).collect();
    let param = |i: usize, sub: usize| d.a + d.len() * (i * REFINE + sub) as f64 / (n * REFINE) as f64;

    let len = |i: usize| (coarse[i + 1][0] - coarse[i][0]).hypot(coarse[i + 1][1] - coarse[i][1]);
    let scale = coarse
        .iter()
        .fold(0.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs()))
        .max(1e-300);
    let eps = 1e-13 * scale * scale;

    // sweep over x-extents widened by the near-miss radius
    let lens: Vec<f64> = (0..n).map(len).collect();
    let mut boxes: Vec<(f64, f64, usize)> = (0..n)
        .map(|i| {
            let r = 10.0 * lens[i];
            let (a, b) = (coarse[i][0], coarse[i + 1][0]);
            (a.min(b) - r, a.max(b) + r, i)
        })
        .collect();
    boxes.sort_by(|x, y| x.0.total_cmp(&y.0));
    let adjacent = |i: usize, j: usize| {
        let diff = i.abs_diff(j);
        diff <= 1 || diff == n - 1
    };
    for (bi, &(_, hi, i)) in boxes.iter().enumerate() {
        for &(lo2, _, j) in &boxes[bi + 1..] {
            if lo2 > hi {
                break;
            }
            if adjacent(i, j) {
                continue;
            }
            let (p1, p2, q1, q2) = (coarse[i], coarse[i + 1], coarse[j], coarse[j + 1]);
            if let Some(point) = segments_meet(p1, p2, q1, q2, eps) {
                let (s, t) = (param(i.min(j), 0), param(i.max(j), 0));
                return Ok(SimplicityReport {
                    simple: false,
                    crossing: Some(Crossing { s, t, point }),
                    resolution: n,
                });
            }
            let radius = 10.0 * lens[i].max(lens[j]);
            if segment_dist(p1, p2, q1, q2) >= radius {
                continue;
            }
            for a in 0..REFINE {
                for b in 0..REFINE {
                    let (ia, ib) = (i * REFINE + a, j * REFINE + b);
                    if let Some(point) = segments_meet(fine[ia], fine[ia + 1], fine[ib], fine[ib + 1], eps) {
                        let (s, t) = (param(i, a), param(j, b));
                        return Ok(SimplicityReport {
                            simple: false,
                            crossing: Some(Crossing {
                                s: s.min(t),
                                t: s.max(t),
                                point,
                            }),
                            resolution: n,
                        });
                    }
                }
            }
        }
    }
    Ok(SimplicityReport {
        simple: true,
        crossing: None,
        resolution: n,
    })
}

/// Sign pattern of `(ℓ, β)` on a convex frontal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexCase {
    /// `ℓ >= 0`, `β >= 0`.
    I,
    /// `ℓ >= 0`, `β <= 0`.
    II,
    /// `ℓ <= 0`, `β <= 0`.
    III,
    /// `ℓ <= 0`, `β >= 0`.
    IV,
    None,
}

impl ConvexCase {
    pub fn name(self) -> &'static str {
        match self {
            ConvexCase::I => "i",
            ConvexCase::II => "ii",
            ConvexCase::III => "iii",
            ConvexCase::IV => "iv",
            ConvexCase::None => "none",
        }
    }
}

impl fmt::Display for ConvexCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityVerdict {
    pub convex: bool,
    pub case: ConvexCase,
    pub min_ell: f64,
    pub max_ell: f64,
    pub min_beta: f64,
    pub max_beta: f64,
    pub isolated_zeros: bool,
}

/// Sampling grid for the sign classification.
const SIGN_GRID: usize = 8192;

/// Zeros of `ℓ` and `β` are isolated.
///
/// Each run of grid samples below the zero band must span fewer than four
/// grid steps, and the root finder must report no zero interval.
pub fn zeros_isolated(curve: &LegendreCurve) -> Result<bool> {
    let c = curve.curvature_pair();
    let cfg = ZeroConfig::periodic(curve.is_closed());
    for f in [&c.ell, &c.beta] {
        if find_zeros(f, &cfg).iter().any(|z| !z.is_isolated()) {
            return Ok(false);
        }
        let grid = f.domain().grid(SIGN_GRID);
        let vals = grid
            .iter()
            .map(|&t| f.value(t))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let sup = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let band = 1e-9 * (1.0 + sup);
        let mut run = 0usize;
        for v in &vals {
            if v.abs() <= band {
                run += 1;
                if run >= 4 {
                    return Ok(false);
                }
            } else {
                run = 0;
            }
        }
    }
    Ok(true)
}

/// Sign classification of `(ℓ, β)` on a simple closed frontal.
pub fn convexity(curve: &LegendreCurve) -> Result<ConvexityVerdict> {
    let simple = is_simple_closed(curve, SIMPLE_RESOLUTION)?;
    if !simple.simple {
        return Err(Error::Hypothesis(format!("{} is not simple", curve.label)));
    }
    let isolated = zeros_isolated(curve)?;
    if !isolated {
        return Err(Error::Hypothesis("zeros of ℓ or β are not isolated".into()));
    }
    let c = curve.curvature_pair();
    let (mut min_l, mut max_l, mut min_b, mut max_b) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for t in curve.domain().grid(SIGN_GRID) {
        let (l, b) = (c.ell.value(t)?, c.beta.value(t)?);
        min_l = min_l.min(l);
        max_l = max_l.max(l);
        min_b = min_b.min(b);
        max_b = max_b.max(b);
    }
    let tol_l = 1e-9 * max_l.abs().max(min_l.abs()).max(1.0);
    let tol_b = 1e-9 * max_b.abs().max(min_b.abs()).max(1.0);
    let (l_pos, l_neg) = (min_l >= -tol_l, max_l <= tol_l);
    let (b_pos, b_neg) = (min_b >= -tol_b, max_b <= tol_b);
    let case = match (l_pos, l_neg, b_pos, b_neg) {
        (true, _, true, _) => ConvexCase::I,
        (true, _, _, true) => ConvexCase::II,
        (_, true, _, true) => ConvexCase::III,
        (_, true, true, _) => ConvexCase::IV,
        _ => ConvexCase::None,
    };
    Ok(ConvexityVerdict {
        convex: case != ConvexCase::None,
        case,
        min_ell: min_l,
        max_ell: max_l,
        min_beta: min_b,
        max_beta: max_b,
        isolated_zeros: isolated,
    })
}
