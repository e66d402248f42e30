//! Expressions flattened into a straight-line program with shared
//! subexpressions evaluated once.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::ast::{Expr, Func};
use crate::error::EvalError;
use crate::numerics::series::Series;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Const(f64),
    Var,
    Neg(u32),
    Add(u32, u32),
    Sub(u32, u32),
    Mul(u32, u32),
    Div(u32, u32),
    /// Power with a constant exponent.
    PowC(u32, f64),
    /// Constant base raised to a variable exponent.
    ExpC(u32, f64),
    Pow(u32, u32),
    PowI(u32, i32),
    Func(Func, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Const(u64),
    Var,
    Un(u8, u32, i64),
    Bin(u8, u32, u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tape {
    ops: Vec<Op>,
}

struct Builder {
    ops: Vec<Op>,
    seen: HashMap<Key, u32>,
}

impl Builder {
    fn push(&mut self, key: Key, op: Op) -> u32 {
        *self.seen.entry(key).or_insert_with(|| {
            self.ops.push(op);
            (self.ops.len() - 1) as u32
        })
    }

    fn constant(&mut self, c: f64) -> u32 {
        self.push(Key::Const(c.to_bits()), Op::Const(c))
    }

    fn node(&mut self, e: &Expr) -> u32 {
        let bin = |b: &mut Builder, tag: u8, x: &Expr, y: &Expr, op: fn(u32, u32) -> Op| {
            let (i, j) = (b.node(x), b.node(y));
            b.push(Key::Bin(tag, i, j), op(i, j))
        };
        match e {
            Expr::Const(c) => self.constant(*c),
            Expr::Pi => self.constant(PI),
            Expr::Var => self.push(Key::Var, Op::Var),
            Expr::Neg(a) => {
                let i = self.node(a);
                self.push(Key::Un(0, i, 0), Op::Neg(i))
            }
            Expr::Add(a, b) => bin(self, 1, a, b, Op::Add),
            Expr::Sub(a, b) => bin(self, 2, a, b, Op::Sub),
            Expr::Mul(a, b) => bin(self, 3, a, b, Op::Mul),
            Expr::Div(a, b) => bin(self, 4, a, b, Op::Div),
            Expr::Pow(a, b) => match (a.constant_value(), b.constant_value()) {
                (_, Some(c)) => {
                    let i = self.node(a);
                    self.push(Key::Un(1, i, c.to_bits() as i64), Op::PowC(i, c))
                }
                (Some(base), None) => {
                    let j = self.node(b);
                    self.push(Key::Un(2, j, base.to_bits() as i64), Op::ExpC(j, base))
                }
                (None, None) => bin(self, 5, a, b, Op::Pow),
            },
            Expr::PowI(a, n) => {
                let i = self.node(a);
                self.push(Key::Un(3, i, *n as i64), Op::PowI(i, *n))
            }
            Expr::Func(f, a) => {
                let i = self.node(a);
                self.push(Key::Un(4 + *f as u8, i, 0), Op::Func(*f, i))
            }
        }
    }
}

fn powf(base: f64, exponent: f64) -> Result<f64, EvalError> {
    if base < 0.0 || (base == 0.0 && exponent < 0.0) {
        return Err(EvalError::PowDomain { base, exponent });
    }
    Ok(base.powf(exponent))
}

impl Tape {
    pub fn compile(e: &Expr) -> Tape {
        let mut b = Builder {
            ops: Vec::new(),
            seen: HashMap::new(),
        };
        b.node(e);
        Tape { ops: b.ops }
    }

    /// Number of distinct subexpressions.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn evaluate(&self, t: f64) -> Result<f64, EvalError> {
        let mut r: Vec<f64> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let g = |i: u32| r[i as usize];
            let v = match *op {
                Op::Const(c) => c,
                Op::Var => t,
                Op::Neg(a) => -g(a),
                Op::Add(a, b) => g(a) + g(b),
                Op::Sub(a, b) => g(a) - g(b),
                Op::Mul(a, b) => g(a) * g(b),
                Op::Div(a, b) => {
                    let d = g(b);
                    if d == 0.0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    g(a) / d
                }
                Op::PowC(a, c) => powf(g(a), c)?,
                Op::ExpC(b, base) => powf(base, g(b))?,
                Op::Pow(a, b) => powf(g(a), g(b))?,
                Op::PowI(a, n) => {
                    let base = g(a);
                    if base == 0.0 && n < 0 {
                        return Err(EvalError::DivisionByZero);
                    }
                    base.powi(n)
                }
                Op::Func(f, a) => f.apply(g(a))?,
            };
            r.push(v);
        }
        Ok(*r.last().expect("tape is never empty"))
    }

    pub fn series(&self, t: f64, order: usize) -> Result<Series, EvalError> {
        let mut r: Vec<Series> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let g = |i: u32| &r[i as usize];
            let s = match *op {
                Op::Const(c) => Series::constant(c, order),
                Op::Var => Series::variable(t, order),
                Op::Neg(a) => -g(a),
                Op::Add(a, b) => g(a) + g(b),
                Op::Sub(a, b) => g(a) - g(b),
                Op::Mul(a, b) => g(a) * g(b),
                Op::Div(a, b) => g(a).div(g(b))?,
                Op::PowC(a, c) => g(a).powf(c)?,
                Op::ExpC(b, base) => {
                    if base <= 0.0 {
                        return Err(EvalError::PowDomain {
                            base,
                            exponent: g(b).value(),
                        });
                    }
                    g(b).scale(base.ln()).exp()
                }
                Op::Pow(a, b) => (&g(a).ln()? * g(b)).exp(),
                Op::PowI(a, n) => g(a).powi(n)?,
                Op::Func(f, a) => {
                    let u = g(a);
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
            };
            r.push(s);
        }
        Ok(r.pop().expect("tape is never empty"))
    }
}
