//! Truncated Taylor series arithmetic.
//!
//! A [`Series`] of order `k` holds the normalized coefficients
//! `c_j = f^(j)(t0) / j!` for `j = 0..=k`. All operations truncate to the
//! shorter operand, so composing maps never asks a child for more terms than
//! the caller requested.

use crate::error::EvalError;
use smallvec::{smallvec, SmallVec};
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficient storage; orders up to 7 stay inline.
pub type Coeffs = SmallVec<[f64; 8]>;

#[derive(Debug, Clone, PartialEq)]
pub struct Series(pub Coeffs);

impl Series {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut c = smallvec![0.0; order + 1];
        c[0] = value;
        Series(c)
    }

    /// The identity map `t` expanded around `t0`.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut c = smallvec![0.0; order + 1];
        c[0] = t0;
        if order >= 1 {
            c[1] = 1.0;
        }
        Series(c)
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative_value(&self, k: usize) -> f64 {
        self.0[k] * factorial(k)
    }

    /// All derivatives `f, f', ..., f^(order)` at the expansion point.
    pub fn derivatives(&self) -> Vec<f64> {
        (0..self.0.len()).map(|k| self.derivative_value(k)).collect()
    }

    pub fn from_derivatives(derivs: &[f64]) -> Self {
        Series(derivs.iter().enumerate().map(|(k, d)| d / factorial(k)).collect())
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.0.truncate(order + 1);
        self
    }

    /// Series of the derivative; loses one order.
    pub fn differentiate(&self) -> Self {
        if self.0.len() == 1 {
            return Series(smallvec![0.0]);
        }
        Series(self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    /// Evaluate the truncated polynomial at offset `h` from the expansion point.
    pub fn eval_at(&self, h: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * h + c)
    }

    /// Re-expand the truncated polynomial around `t0 + h`, keeping `order` terms.
    pub fn recenter(&self, h: f64, order: usize) -> Self {
        let n = self.0.len();
        let mut out = smallvec![0.0; order + 1];
        // Coefficient j of p(h + s) is sum_k c_k C(k, j) h^(k-j).
        for (j, slot) in out.iter_mut().enumerate() {
            if j >= n {
                break;
            }
            let mut acc = 0.0;
            let mut binom = 1.0;
            let mut hp = 1.0;
            for k in j..n {
                acc += self.0[k] * binom * hp;
                binom = binom * (k + 1) as f64 / (k + 1 - j) as f64;
                hp *= h;
            }
            *slot = acc;
        }
        Series(out)
    }

    /// Drop the first `j` coefficients (division by `h^j`), keeping the length
    /// reduced by `j`.
    pub fn shift_down(&self, j: usize) -> Self {
        Series(SmallVec::from_slice(&self.0[j.min(self.0.len() - 1)..]))
    }

    pub fn scale(&self, s: f64) -> Self {
        Series(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        let mut c = self.0.clone();
        c[0] += s;
        Series(c)
    }

    pub fn div(&self, other: &Series) -> Result<Series, EvalError> {
        let n = self.0.len().min(other.0.len());
        let v0 = other.0[0];
        if v0 == 0.0 {
            return Err(EvalError::DivisionByZero);
        }
        let mut q = smallvec![0.0; n];
        for k in 0..n {
            let mut acc = self.0[k];
            for j in 1..=k {
                acc -= other.0[j] * q[k - j];
            }
            q[k] = acc / v0;
        }
        Ok(Series(q))
    }

    pub fn recip(&self) -> Result<Series, EvalError> {
        Series::constant(1.0, self.order()).div(self)
    }

    /// `(sin u, cos u)` jointly.
    pub fn sin_cos(&self) -> (Series, Series) {
        let n = self.0.len();
        let mut s = smallvec![0.0; n];
        let mut c = smallvec![0.0; n];
        s[0] = self.0[0].sin();
        c[0] = self.0[0].cos();
        for k in 1..n {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for j in 1..=k {
                let ju = j as f64 * self.0[j];
                sa += ju * c[k - j];
                ca -= ju * s[k - j];
            }
            s[k] = sa / k as f64;
            c[k] = ca / k as f64;
        }
        (Series(s), Series(c))
    }

    pub fn exp(&self) -> Series {
        let n = self.0.len();
        let mut e = smallvec![0.0; n];
        e[0] = self.0[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.0[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Series(e)
    }

    pub fn ln(&self) -> Result<Series, EvalError> {
        let u0 = self.0[0];
        if u0 <= 0.0 {
            return Err(EvalError::LogDomain(u0));
        }
        let n = self.0.len();
        let mut l = smallvec![0.0; n];
        l[0] = u0.ln();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..k {
                acc += j as f64 * l[j] * self.0[k - j];
            }
            l[k] = (self.0[k] - acc / k as f64) / u0;
        }
        Ok(Series(l))
    }

    /// `u^c` for a real constant exponent; needs a positive base unless only
    /// the value is requested and the exponent is non-negative.
    pub fn powf(&self, c: f64) -> Result<Series, EvalError> {
        let u0 = self.0[0];
        let n = self.0.len();
        if u0 < 0.0 || (u0 == 0.0 && (n > 1 || c < 0.0)) {
            return Err(EvalError::PowDomain { base: u0, exponent: c });
        }
        let mut p = smallvec![0.0; n];
        p[0] = u0.powf(c);
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (c * j as f64 - (k - j) as f64) * self.0[j] * p[k - j];
            }
            p[k] = acc / (k as f64 * u0);
        }
        Ok(Series(p))
    }

    pub fn sqrt(&self) -> Result<Series, EvalError> {
        let u0 = self.0[0];
        if u0 < 0.0 || (u0 == 0.0 && self.0.len() > 1) {
            return Err(EvalError::SqrtDomain(u0));
        }
        self.powf(0.5)
    }

    /// Integer power by repeated squaring; valid at a zero base.
    pub fn powi(&self, n: i32) -> Result<Series, EvalError> {
        let mut base = self.clone();
        let mut acc = Series::constant(1.0, self.order());
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    /// Composition `f ∘ s` where `self` is the series of `f` expanded at
    /// `s(u0)` and `inner` is the series of `s` at `u0`.
    pub fn compose(&self, inner: &Series) -> Series {
        let n = self.0.len().min(inner.0.len());
        let mut d = inner.0[..n].to_vec();
        d[0] = 0.0;
        let d = Series(d.into());
        let mut out = smallvec![0.0; n];
        out[0] = self.0[0];
        let mut power = Series::constant(1.0, n - 1);
        for k in 1..n {
            power = &power * &d;
            for (o, p) in out.iter_mut().zip(&power.0) {
                *o += self.0[k] * p;
            }
        }
        Series(out)
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        Series(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        Series(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let n = self.0.len().min(rhs.0.len());
        let mut out = smallvec![0.0; n];
        for (i, a) in self.0[..n].iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in rhs.0[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Series(out)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series(self.0.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn sin_cos_derivatives() {
        let t = 0.7;
        let (s, c) = Series::variable(t, 6).sin_cos();
        let expect = [t.sin(), t.cos(), -t.sin(), -t.cos(), t.sin(), t.cos(), -t.sin()];
        for (k, e) in expect.iter().enumerate() {
            assert!(close(s.derivative_value(k), *e, 1e-13), "k={k}");
        }
        assert!(close(c.derivative_value(3), t.sin(), 1e-13));
    }

    #[test]
    fn powf_matches_closed_form() {
        // (1 + t)^1.5 at t = 0.3
        let u = Series::variable(1.3, 4);
        let p = u.powf(1.5).unwrap();
        assert!(close(p.derivative_value(1), 1.5 * 1.3f64.sqrt(), 1e-13));
        assert!(close(p.derivative_value(2), 0.75 / 1.3f64.sqrt(), 1e-13));
        assert!(close(p.derivative_value(3), -0.375 * 1.3f64.powf(-1.5), 1e-13));
    }

    #[test]
    fn powi_at_zero_base() {
        let p = Series::variable(0.0, 6).powi(5).unwrap();
        assert_eq!(p.derivative_value(5), 120.0);
        assert_eq!(p.derivative_value(4), 0.0);
    }

    #[test]
    fn division_and_log() {
        let u = Series::variable(2.0, 5);
        let q = Series::constant(1.0, 5).div(&u).unwrap();
        assert!(close(q.derivative_value(2), 2.0 / 8.0, 1e-14));
        let l = u.ln().unwrap();
        assert!(close(l.derivative_value(3), 2.0 / 8.0, 1e-14));
        assert!(Series::variable(0.0, 2).ln().is_err());
    }

    #[test]
    fn recenter_is_exact_for_polynomials() {
        // p(h) = 1 + 2h + 3h^2 re-expanded at h = 0.5
        let p = Series(smallvec![1.0, 2.0, 3.0]);
        let r = p.recenter(0.5, 2);
        assert!(close(r.0[0], 1.0 + 1.0 + 0.75, 1e-15));
        assert!(close(r.0[1], 2.0 + 3.0, 1e-15));
        assert!(close(r.0[2], 3.0, 1e-15));
    }

    #[test]
    fn compose_sin_of_square() {
        // sin(u^2) at u = 0.4
        let inner = Series::variable(0.4, 4).powi(2).unwrap();
        let (outer, _) = Series::variable(inner.value(), 4).sin_cos();
        let comp = outer.compose(&inner);
        let (direct, _) = inner.sin_cos();
        for k in 0..=4 {
            assert!(close(comp.0[k], direct.0[k], 1e-13));
        }
    }
}
