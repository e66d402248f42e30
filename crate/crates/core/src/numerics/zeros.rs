use super::smooth::SmoothMap;

/// Default sampling grid.
pub const DEFAULT_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroConfig {
    /// Number of grid intervals.
    pub grid: usize,
    /// Relative zero tolerance: `eps_z = zero_tol * (1 + max |f|)`.
    pub zero_tol: f64,
    /// Cluster radius relative to the domain length.
    pub cluster_radius: f64,
    /// Treat the domain as a circle (`a` identified with `b`).
    pub periodic: bool,
}

impl Default for ZeroConfig {
    fn default() -> Self {
        ZeroConfig {
            grid: DEFAULT_GRID,
            zero_tol: 1e-8,
            cluster_radius: 1e-6,
            periodic: false,
        }
    }
}

impl ZeroConfig {
    pub fn periodic(periodic: bool) -> Self {
        ZeroConfig {
            periodic,
            ..Default::default()
        }
    }

    pub fn with_grid(mut self, grid: usize) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_tol(mut self, zero_tol: f64) -> Self {
        self.zero_tol = zero_tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroKind {
    Crossing,
    Tangential,
    /// `f` vanishes on a whole parameter interval starting at `location`.
    NonIsolated {
        end: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub location: f64,
    pub kind: ZeroKind,
    pub multiplicity: usize,
    pub residual: f64,
}

impl Zero {
    pub fn is_isolated(&self) -> bool {
        !matches!(self.kind, ZeroKind::NonIsolated { .. })
    }
}

/// Smallest `j >= 1` with a non-negligible `j`-th derivative at `t0`.
///
/// A derivative counts as zero when `|f^(j)| <= 1e-7 * scale`, where `scale`
/// is the largest of the first `max_k` derivative magnitudes (at least 1).
pub fn vanishing_order(f: &SmoothMap, t0: f64, max_k: usize) -> Option<usize> {
    let max_k = max_k.min(f.declared_order());
    if max_k == 0 {
        return None;
    }
    let derivs = f.series(t0, max_k).ok()?.derivatives();
    let scale = derivs[1..].iter().fold(1.0f64, |m, d| m.max(d.abs()));
    (1..=max_k).find(|&j| derivs[j].abs() > 1e-7 * scale)
}

fn eval(f: &SmoothMap, t: f64) -> f64 {
    f.value(t).unwrap_or(f64::NAN)
}

/// Root of `f` inside a sign-change bracket, by Illinois regula falsi with
/// forced bisection whenever progress stalls.
pub fn refine_bracket(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let mut side = 0i32;
    for it in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let width = b - a;
        let mut c = if it % 3 == 2 {
            0.5 * (a + b)
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        if !c.is_finite() || c <= a || c >= b {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if fc == 0.0 || fc.is_nan() {
            return c;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a) > 0.5 * width && it % 3 == 1 {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                return m;
            }
            if fm.signum() == fb.signum() {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
    }
    if f(a).abs() < f(b).abs() {
        a
    } else {
        b
    }
}

/// Minimizer of `|f|` on `[a, b]`: root of `f'` when bracketed, otherwise a
/// golden-section search.
fn minimize_abs(f: &SmoothMap, a: f64, b: f64, tol: f64) -> f64 {
    let df = |t: f64| f.deriv(1, t).unwrap_or(f64::NAN);
    let (da, db) = (df(a), df(b));
    let abs = |t: f64| eval(f, t).abs();
    let best_end = if abs(a) < abs(b) { a } else { b };
    if da.is_finite() && db.is_finite() && da * db < 0.0 {
        let c = refine_bracket(df, a, b, tol);
        return if abs(c) <= abs(best_end) { c } else { best_end };
    }
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (abs(x1), abs(x2));
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = abs(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = abs(x2);
        }
    }
    let c = 0.5 * (lo + hi);
    if abs(c) <= abs(best_end) {
        c
    } else {
        best_end
    }
}

struct Candidate {
    t: f64,
    crossing: bool,
    residual: f64,
}

/// All zeros of `f` over its domain.
///
/// Sign changes on a uniform grid are bracketed and refined; local minima of
/// `|f|` without a sign change are refined and kept when below the zero
/// tolerance. Points closer than the cluster radius are merged.
pub fn find_zeros(f: &SmoothMap, cfg: &ZeroConfig) -> Vec<Zero> {
    let dom = f.domain();
    let (a, b) = (dom.a, dom.b);
    let n = cfg.grid.max(16);
    let len = b - a;
    let h = len / n as f64;
    let ts: Vec<f64> = dom.grid(n);
    let mut fs: Vec<f64> = ts.iter().map(|&t| eval(f, t)).collect();
    if cfg.periodic {
        fs[n] = fs[0];
    }
    let fmax = fs.iter().filter(|v| v.is_finite()).fold(0.0f64, |m, v| m.max(v.abs()));
    let eps_z = cfg.zero_tol * (1.0 + fmax);
    let tiny = 1e-12 * (1.0 + fmax);
    let delta = cfg.cluster_radius * len;
    let tol = 1e-13 * len;

    let mut zeros: Vec<Zero> = Vec::new();
    let mut flat = vec![false; n + 1];

    // runs of (numerically) identically zero samples
    let min_run = (n / 32).max(8);
    let mut i = 0;
    while i <= n {
        if fs[i].abs() <= tiny {
            let start = i;
            while i <= n && fs[i].abs() <= tiny {
                i += 1;
            }
            if i - start >= min_run {
                for v in &mut flat[start..i] {
                    *v = true;
                }
                zeros.push(Zero {
                    location: ts[start],
                    kind: ZeroKind::NonIsolated { end: ts[i - 1] },
                    multiplicity: f.declared_order(),
                    residual: 0.0,
                });
            }
        } else {
            i += 1;
        }
    }

    let mut cands: Vec<Candidate> = Vec::new();
    let count = if cfg.periodic { n } else { n + 1 };
    let at = |j: isize| -> usize {
        if cfg.periodic {
            j.rem_euclid(n as isize) as usize
        } else {
            j as usize
        }
    };
    let fv = |t: f64| eval(f, t);

    for i in 0..n {
        let (f0, f1) = (fs[i], fs[i + 1]);
        if flat[i] || flat[i + 1] || !f0.is_finite() || !f1.is_finite() {
            continue;
        }
        if f0 * f1 < 0.0 {
            let t = refine_bracket(fv, ts[i], ts[i + 1], tol);
            cands.push(Candidate {
                t,
                crossing: true,
                residual: fv(t).abs(),
            });
        }
    }

    for i in 0..count {
        let fi = fs[i];
        if flat[i] || !fi.is_finite() {
            continue;
        }
        let has_prev = cfg.periodic || i > 0;
        let has_next = cfg.periodic || i < n;
        let prev = if has_prev { fs[at(i as isize - 1)] } else { f64::NAN };
        let next = if has_next { fs[at(i as isize + 1)] } else { f64::NAN };
        if fi == 0.0 {
            let crossing = has_prev && has_next && prev * next < 0.0;
            cands.push(Candidate {
                t: ts[i],
                crossing,
                residual: 0.0,
            });
            continue;
        }
        if !has_prev || !has_next {
            // endpoint of an open interval
            let other = if has_next { next } else { prev };
            if fi.abs() <= eps_z && fi.abs() <= other.abs() {
                cands.push(Candidate {
                    t: ts[i],
                    crossing: false,
                    residual: fi.abs(),
                });
            }
            continue;
        }
        let is_min = fi.abs() <= prev.abs() && fi.abs() < next.abs();
        let same_sign = prev * fi > 0.0 && next * fi > 0.0;
        if !(is_min && same_sign) {
            continue;
        }
        let lo = ts[i] - h;
        let hi = ts[i] + h;
        let t = minimize_abs(f, lo, hi, tol);
        let r = fv(t).abs();
        if r <= eps_z {
            cands.push(Candidate {
                t,
                crossing: false,
                residual: r,
            });
        }
    }

    // wrap onto [a, b) for closed curves
    if cfg.periodic {
        for c in &mut cands {
            if c.t >= b - delta {
                c.t -= len;
            }
            if c.t < a {
                if c.t > a - delta {
                    c.t = a;
                } else {
                    c.t += len;
                }
            }
        }
    }
    cands.sort_by(|x, y| x.t.total_cmp(&y.t));

    let mut clusters: Vec<Vec<Candidate>> = Vec::new();
    for c in cands {
        match clusters.last_mut() {
            Some(cl) if c.t - cl.last().unwrap().t <= delta => cl.push(c),
            _ => clusters.push(vec![c]),
        }
    }
    if cfg.periodic && clusters.len() > 1 {
        let first_t = clusters[0][0].t;
        let last_t = clusters.last().unwrap().last().unwrap().t;
        if first_t + len - last_t <= delta {
            let tail = clusters.pop().unwrap();
            clusters[0].extend(tail);
        }
    }

    let max_k = f.declared_order().min(7);
    for cl in clusters {
        let crossings = cl.iter().filter(|c| c.crossing).count();
        let mut best = cl
            .iter()
            .min_by(|x, y| x.residual.total_cmp(&y.residual))
            .map(|c| (c.t, c.residual))
            .unwrap();
        if cl.len() > 1 {
            let lo = cl.iter().map(|c| c.t).fold(f64::INFINITY, f64::min) - h;
            let hi = cl.iter().map(|c| c.t).fold(f64::NEG_INFINITY, f64::max) + h;
            let t = minimize_abs(f, lo, hi, tol);
            let r = fv(t).abs();
            if r < best.1 {
                best = (t, r);
            }
        }
        let kind = if crossings % 2 == 1 {
            ZeroKind::Crossing
        } else {
            ZeroKind::Tangential
        };
        let multiplicity = vanishing_order(f, best.0, max_k).unwrap_or(max_k.max(1));
        zeros.push(Zero {
            location: best.0,
            kind,
            multiplicity,
            residual: best.1,
        });
    }
    zeros.sort_by(|x, y| x.location.total_cmp(&y.location));
    zeros
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Interval;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn locs(z: &[Zero]) -> Vec<f64> {
        z.iter().map(|z| z.location).collect()
    }

    #[test]
    fn cosine_crossings() {
        let f = SmoothMap::parse("cos(t)", Interval::new(0.0, 2.0 * PI)).unwrap();
        let z = find_zeros(&f, &ZeroConfig::default());
        assert_eq!(z.len(), 2);
        assert!((z[0].location - PI / 2.0).abs() < 1e-10);
        assert!((z[1].location - 3.0 * PI / 2.0).abs() < 1e-10);
        assert!(z.iter().all(|z| z.kind == ZeroKind::Crossing && z.multiplicity == 1));
    }

    #[test]
    fn nephroid_vertex_function() {
        let f = SmoothMap::parse("-3*cos(t)", Interval::new(0.0, 2.0 * PI)).unwrap();
        let z = find_zeros(&f, &ZeroConfig::periodic(true));
        let l = locs(&z);
        assert_eq!(l.len(), 2);
        assert!((l[0] - PI / 2.0).abs() < 1e-10 && (l[1] - 1.5 * PI).abs() < 1e-10);
    }

    #[test]
    fn square_is_tangential_of_multiplicity_two() {
        let f = SmoothMap::parse("t^2", Interval::new(-1.0, 1.0)).unwrap();
        let z = find_zeros(&f, &ZeroConfig::default());
        assert_eq!(z.len(), 1);
        assert!(z[0].location.abs() < 1e-10);
        assert_eq!(z[0].kind, ZeroKind::Tangential);
        assert_eq!(z[0].multiplicity, 2);
    }

    #[test]
    fn off_grid_tangential_zero() {
        let f = SmoothMap::parse("(t - 0.123456789)^2", Interval::new(-1.0, 1.0)).unwrap();
        let z = find_zeros(&f, &ZeroConfig::default());
        assert_eq!(z.len(), 1);
        assert!((z[0].location - 0.123456789).abs() < 1e-6);
        assert_eq!(z[0].multiplicity, 2);
    }

    #[test]
    fn periodic_endpoints_merge() {
        let f = SmoothMap::parse("sin(t)", Interval::new(0.0, 2.0 * PI)).unwrap();
        let z = find_zeros(&f, &ZeroConfig::periodic(true));
        let l = locs(&z);
        assert_eq!(l.len(), 2, "{l:?}");
        assert!(l[0].abs() < 1e-12 && (l[1] - PI).abs() < 1e-10);
        let open = find_zeros(&f, &ZeroConfig::default());
        assert_eq!(open.len(), 3);
    }

    #[test]
    fn crossing_of_odd_multiplicity() {
        let f = SmoothMap::parse("(t - 0.3)^3", Interval::new(-1.0, 1.0)).unwrap();
        let z = find_zeros(&f, &ZeroConfig::default());
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].kind, ZeroKind::Crossing);
        assert!((z[0].location - 0.3).abs() < 1e-6);
    }

    #[test]
    fn flat_interval_is_non_isolated() {
        let f = SmoothMap::finite_difference(|t| if t < 0.0 { 0.0 } else { t.powi(4) }, Interval::new(-1.0, 1.0), 4);
        let z = find_zeros(&f, &ZeroConfig::default());
        assert!(z.iter().any(|z| !z.is_isolated()));
    }

    #[test]
    fn vanishing_orders() {
        let d = Interval::new(-1.0, 1.0);
        let f = SmoothMap::parse("t^3", d).unwrap();
        assert_eq!(vanishing_order(&f, 0.0, 7), Some(3));
        let f = SmoothMap::parse("cos(t)^5/5 - 1/5", d).unwrap();
        assert_eq!(vanishing_order(&f, 0.0, 7), Some(2));
        let f = SmoothMap::parse("sin(t)^5/5", d).unwrap();
        assert_eq!(vanishing_order(&f, 0.0, 7), Some(5));
        let f = SmoothMap::parse("t^9", d).unwrap();
        assert_eq!(vanishing_order(&f, 0.0, 7), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn zeros_are_scale_invariant(
            c in prop::sample::select(vec![1e3, 1e-3]),
            w in 1.0f64..4.0,
            phase in 0.0f64..6.0,
        ) {
            let d = Interval::new(0.0, 2.0 * PI);
            let text = format!("sin({w}*t + {phase}) + 0.3*cos(2*t)");
            let f = SmoothMap::parse(&text, d).unwrap();
            let g = f.scale(c);
            let cfg = ZeroConfig::periodic(true);
            let a = locs(&find_zeros(&f, &cfg));
            let b = locs(&find_zeros(&g, &cfg));
            prop_assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-9, "{} vs {}", x, y);
            }
        }
    }
}
