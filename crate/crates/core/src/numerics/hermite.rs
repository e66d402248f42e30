use super::series::Series;
use super::smooth::{Interval, SmoothMap};

/// Piecewise quintic Hermite interpolant on a uniform grid, matching value,
/// first and second derivative at every node.
#[derive(Debug, Clone)]
pub struct QuinticHermite {
    a: f64,
    h: f64,
    coeffs: Vec<[f64; 6]>,
}

impl QuinticHermite {
    /// `y`, `d1`, `d2` hold data at `domain.grid(n)` with `n = y.len() - 1`.
    pub fn new(domain: Interval, y: &[f64], d1: &[f64], d2: &[f64]) -> Self {
        let n = y.len() - 1;
        assert!(n >= 1 && d1.len() == n + 1 && d2.len() == n + 1);
        let h = domain.len() / n as f64;
        let coeffs = (0..n)
            .map(|i| {
                let (c0, c1, c2) = (y[i], d1[i], 0.5 * d2[i]);
                let dy = y[i + 1] - (c0 + h * (c1 + h * c2));
                let dd = (d1[i + 1] - (c1 + 2.0 * c2 * h)) * h;
                let ddd = (d2[i + 1] - 2.0 * c2) * h * h;
                let a3 = 10.0 * dy - 4.0 * dd + 0.5 * ddd;
                let a4 = -15.0 * dy + 7.0 * dd - ddd;
                let a5 = 6.0 * dy - 3.0 * dd + 0.5 * ddd;
                [c0, c1, c2, a3 / h.powi(3), a4 / h.powi(4), a5 / h.powi(5)]
            })
            .collect();
        QuinticHermite { a: domain.a, h, coeffs }
    }

    fn piece(&self, t: f64) -> (usize, f64) {
        let n = self.coeffs.len();
        let i = ((t - self.a) / self.h).floor();
        let i = if i.is_nan() {
            0
        } else {
            (i.max(0.0) as usize).min(n - 1)
        };
        (i, t - (self.a + i as f64 * self.h))
    }

    pub fn value(&self, t: f64) -> f64 {
        let (i, s) = self.piece(t);
        self.coeffs[i].iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn series(&self, t: f64, order: usize) -> Series {
        let (i, s) = self.piece(t);
        Series(self.coeffs[i].iter().copied().collect()).recenter(s, order)
    }

    /// Wrap as a map of declared order `order`.
    pub fn into_map(self, domain: Interval, order: usize) -> SmoothMap {
        let this = std::sync::Arc::new(self);
        let t2 = this.clone();
        SmoothMap::from_parts(
            domain,
            order,
            true,
            move |t, k| Ok(this.series(t, k)),
            move |t| Ok(t2.value(t)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_quintics() {
        let p = |t: f64| 1.0 - 2.0 * t + 0.5 * t.powi(3) - t.powi(5);
        let dp = |t: f64| -2.0 + 1.5 * t * t - 5.0 * t.powi(4);
        let ddp = |t: f64| 3.0 * t - 20.0 * t.powi(3);
        let d = Interval::new(-1.0, 2.0);
        let g = d.grid(7);
        let y: Vec<f64> = g.iter().map(|&t| p(t)).collect();
        let d1: Vec<f64> = g.iter().map(|&t| dp(t)).collect();
        let d2: Vec<f64> = g.iter().map(|&t| ddp(t)).collect();
        let q = QuinticHermite::new(d, &y, &d1, &d2);
        for t in [-1.0, -0.77, 0.0, 0.31, 1.5, 2.0] {
            assert!((q.value(t) - p(t)).abs() < 1e-12);
            let s = q.series(t, 2);
            assert!((s.derivative_value(1) - dp(t)).abs() < 1e-11);
            assert!((s.derivative_value(2) - ddp(t)).abs() < 1e-10);
        }
    }
}
