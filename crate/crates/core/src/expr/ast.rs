use std::f64::consts::PI;
use std::fmt;

use crate::error::EvalError;
use crate::numerics::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sqrt,
    Exp,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "log" => Func::Log,
            _ => return None,
        })
    }

    pub(crate) fn apply(self, x: f64) -> Result<f64, EvalError> {
        match self {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => {
                let c = x.cos();
                if c == 0.0 {
                    Err(EvalError::DivisionByZero)
                } else {
                    Ok(x.sin() / c)
                }
            }
            Func::Sqrt if x < 0.0 => Err(EvalError::SqrtDomain(x)),
            Func::Sqrt => Ok(x.sqrt()),
            Func::Exp => Ok(x.exp()),
            Func::Log if x <= 0.0 => Err(EvalError::LogDomain(x)),
            Func::Log => Ok(x.ln()),
        }
    }
}

/// One-variable expression in `t`.
///
/// Build trees through the associated constructors ([`Expr::add`],
/// [`Expr::mul`], ...) rather than the variants directly: they fold constant
/// subtrees and drop neutral elements.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Pi,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Real power; either the base or the exponent is free of `t`.
    Pow(Box<Expr>, Box<Expr>),
    PowI(Box<Expr>, i32),
    Func(Func, Box<Expr>),
}

impl Expr {
    pub fn t() -> Expr {
        Expr::Var
    }

    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    /// Value of the subtree when it does not depend on `t`.
    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            Expr::Pi => Some(PI),
            _ if self.depends_on_t() => None,
            _ => self.evaluate(0.0).ok(),
        }
    }

    pub fn depends_on_t(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Pi => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::PowI(a, _) | Expr::Func(_, a) => a.depends_on_t(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.depends_on_t() || b.depends_on_t()
            }
        }
    }

    fn is_const(&self, v: f64) -> bool {
        matches!(self, Expr::Const(c) if *c == v)
    }

    fn fold(e: Expr) -> Expr {
        if !e.depends_on_t() && !matches!(e, Expr::Const(_) | Expr::Pi) {
            if let Ok(v) = e.evaluate(0.0) {
                if v.is_finite() {
                    return Expr::Const(v);
                }
            }
        }
        e
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Expr {
        if a.is_const(0.0) {
            return b;
        }
        if b.is_const(0.0) {
            return a;
        }
        Expr::fold(Expr::Add(Box::new(a), Box::new(b)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Expr {
        if b.is_const(0.0) {
            return a;
        }
        if a.is_const(0.0) {
            return Expr::neg(b);
        }
        Expr::fold(Expr::Sub(Box::new(a), Box::new(b)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Expr {
        if a.is_const(0.0) || b.is_const(0.0) {
            return Expr::Const(0.0);
        }
        if a.is_const(1.0) {
            return b;
        }
        if b.is_const(1.0) {
            return a;
        }
        if a.is_const(-1.0) {
            return Expr::neg(b);
        }
        if b.is_const(-1.0) {
            return Expr::neg(a);
        }
        Expr::fold(Expr::Mul(Box::new(a), Box::new(b)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(a: Expr, b: Expr) -> Expr {
        if b.is_const(1.0) {
            return a;
        }
        if a.is_const(0.0) && !b.is_const(0.0) {
            return Expr::Const(0.0);
        }
        Expr::fold(Expr::Div(Box::new(a), Box::new(b)))
    }

    pub fn powi(a: Expr, n: i32) -> Expr {
        match n {
            0 => Expr::Const(1.0),
            1 => a,
            _ => Expr::fold(Expr::PowI(Box::new(a), n)),
        }
    }

    /// Power with folding of integer exponents into [`Expr::PowI`].
    pub fn pow(a: Expr, b: Expr) -> Expr {
        if let Some(c) = b.constant_value() {
            if c.fract() == 0.0 && c.abs() <= i32::MAX as f64 {
                return Expr::powi(a, c as i32);
            }
        }
        Expr::fold(Expr::Pow(Box::new(a), Box::new(b)))
    }

    pub fn func(f: Func, a: Expr) -> Expr {
        Expr::fold(Expr::Func(f, Box::new(a)))
    }

    pub fn sin(a: Expr) -> Expr {
        Expr::func(Func::Sin, a)
    }

    pub fn cos(a: Expr) -> Expr {
        Expr::func(Func::Cos, a)
    }

    pub fn sqrt(a: Expr) -> Expr {
        Expr::func(Func::Sqrt, a)
    }

    /// Substitute `inner` for `t`.
    pub fn substitute(&self, inner: &Expr) -> Expr {
        match self {
            Expr::Var => inner.clone(),
            Expr::Const(_) | Expr::Pi => self.clone(),
            Expr::Neg(a) => Expr::neg(a.substitute(inner)),
            Expr::Add(a, b) => Expr::add(a.substitute(inner), b.substitute(inner)),
            Expr::Sub(a, b) => Expr::sub(a.substitute(inner), b.substitute(inner)),
            Expr::Mul(a, b) => Expr::mul(a.substitute(inner), b.substitute(inner)),
            Expr::Div(a, b) => Expr::div(a.substitute(inner), b.substitute(inner)),
            Expr::Pow(a, b) => Expr::pow(a.substitute(inner), b.substitute(inner)),
            Expr::PowI(a, n) => Expr::powi(a.substitute(inner), *n),
            Expr::Func(f, a) => Expr::func(*f, a.substitute(inner)),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var | Expr::Pi => 1,
            Expr::Neg(a) | Expr::PowI(a, _) | Expr::Func(_, a) => 1 + a.node_count(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }

    pub fn evaluate(&self, t: f64) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Pi => PI,
            Expr::Neg(a) => -a.evaluate(t)?,
            Expr::Add(a, b) => a.evaluate(t)? + b.evaluate(t)?,
            Expr::Sub(a, b) => a.evaluate(t)? - b.evaluate(t)?,
            Expr::Mul(a, b) => a.evaluate(t)? * b.evaluate(t)?,
            Expr::Div(a, b) => {
                let d = b.evaluate(t)?;
                if d == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                a.evaluate(t)? / d
            }
            Expr::Pow(a, b) => {
                let base = a.evaluate(t)?;
                let exponent = b.evaluate(t)?;
                if base < 0.0 || (base == 0.0 && exponent < 0.0) {
                    return Err(EvalError::PowDomain { base, exponent });
                }
                base.powf(exponent)
            }
            Expr::PowI(a, n) => {
                let base = a.evaluate(t)?;
                if base == 0.0 && *n < 0 {
                    return Err(EvalError::DivisionByZero);
                }
                base.powi(*n)
            }
            Expr::Func(f, a) => f.apply(a.evaluate(t)?)?,
        })
    }

    /// Taylor series of the expression at `t` up to `order`.
    pub fn series(&self, t: f64, order: usize) -> Result<Series, EvalError> {
        Ok(match self {
            Expr::Const(c) => Series::constant(*c, order),
            Expr::Var => Series::variable(t, order),
            Expr::Pi => Series::constant(PI, order),
            Expr::Neg(a) => -&a.series(t, order)?,
            Expr::Add(a, b) => a.series(t, order)? + b.series(t, order)?,
            Expr::Sub(a, b) => a.series(t, order)? - b.series(t, order)?,
            Expr::Mul(a, b) => a.series(t, order)? * b.series(t, order)?,
            Expr::Div(a, b) => a.series(t, order)?.div(&b.series(t, order)?)?,
            Expr::Pow(a, b) => match b.constant_value() {
                Some(c) => a.series(t, order)?.powf(c)?,
                None => {
                    let base = a.constant_value().expect("base of a variable exponent is constant");
                    if base <= 0.0 {
                        return Err(EvalError::PowDomain {
                            base,
                            exponent: b.evaluate(t)?,
                        });
                    }
                    b.series(t, order)?.scale(base.ln()).exp()
                }
            },
            Expr::PowI(a, n) => a.series(t, order)?.powi(*n)?,
            Expr::Func(f, a) => {
                let u = a.series(t, order)?;
                match f {
                    Func::Sin => u.sin_cos().0,
                    Func::Cos => u.sin_cos().1,
                    Func::Tan => {
                        let (s, c) = u.sin_cos();
                        s.div(&c)?
                    }
                    Func::Sqrt => u.sqrt()?,
                    Func::Exp => u.exp(),
                    Func::Log => u.ln()?,
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) | Expr::PowI(..) => 4,
            Expr::Const(c) if *c < 0.0 => 5,
            _ => 5,
        }
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    if c < 0.0 {
        write!(f, "(-{:?})", -c)
    } else {
        write!(f, "{c:?}")
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write_const(f, *c),
            Expr::Var => write!(f, "t"),
            Expr::Pi => write!(f, "pi"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_child(f, a, 3)
            }
            Expr::Add(a, b) => {
                write_child(f, a, 1)?;
                write!(f, " + ")?;
                write_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_child(f, a, 1)?;
                write!(f, " - ")?;
                write_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_child(f, a, 2)?;
                write!(f, "*")?;
                write_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                write_child(f, a, 2)?;
                write!(f, "/")?;
                write_child(f, b, 3)
            }
            Expr::Pow(a, b) => {
                write_child(f, a, 5)?;
                write!(f, "^")?;
                write_child(f, b, 5)
            }
            Expr::PowI(a, n) => {
                write_child(f, a, 5)?;
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Expr::Func(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
