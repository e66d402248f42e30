use super::ast::{Expr, Func};

/// Exact derivative with respect to `t`.
pub fn differentiate(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Pi => Expr::c(0.0),
        Expr::Var => Expr::c(1.0),
        Expr::Neg(a) => Expr::neg(differentiate(a)),
        Expr::Add(a, b) => Expr::add(differentiate(a), differentiate(b)),
        Expr::Sub(a, b) => Expr::sub(differentiate(a), differentiate(b)),
        Expr::Mul(a, b) => Expr::add(
            Expr::mul(differentiate(a), (**b).clone()),
            Expr::mul((**a).clone(), differentiate(b)),
        ),
        Expr::Div(a, b) => Expr::div(
            Expr::sub(
                Expr::mul(differentiate(a), (**b).clone()),
                Expr::mul((**a).clone(), differentiate(b)),
            ),
            Expr::powi((**b).clone(), 2),
        ),
        Expr::PowI(a, n) => Expr::mul(
            Expr::mul(Expr::c(*n as f64), Expr::powi((**a).clone(), n - 1)),
            differentiate(a),
        ),
        Expr::Pow(a, b) => match b.constant_value() {
            Some(c) => Expr::mul(
                Expr::mul(Expr::c(c), Expr::pow((**a).clone(), Expr::c(c - 1.0))),
                differentiate(a),
            ),
            // b^c * (c' log b + c b'/b)
            None => Expr::mul(
                e.clone(),
                Expr::add(
                    Expr::mul(differentiate(b), Expr::func(Func::Log, (**a).clone())),
                    Expr::div(Expr::mul((**b).clone(), differentiate(a)), (**a).clone()),
                ),
            ),
        },
        Expr::Func(f, a) => {
            let inner = differentiate(a);
            let outer = match f {
                Func::Sin => Expr::cos((**a).clone()),
                Func::Cos => Expr::neg(Expr::sin((**a).clone())),
                Func::Tan => Expr::div(Expr::c(1.0), Expr::powi(Expr::cos((**a).clone()), 2)),
                Func::Sqrt => Expr::div(Expr::c(0.5), e.clone()),
                Func::Exp => e.clone(),
                Func::Log => Expr::div(Expr::c(1.0), (**a).clone()),
            };
            Expr::mul(outer, inner)
        }
    }
}

/// `k`-fold derivative.
pub fn differentiate_n(e: &Expr, k: usize) -> Expr {
    (0..k).fold(e.clone(), |acc, _| differentiate(&acc))
}
