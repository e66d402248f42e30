//! One-variable expressions: parsing, evaluation and symbolic differentiation.

mod ast;
mod diff;
mod parse;
mod tape;

pub use ast::{Expr, Func};
pub use diff::{differentiate, differentiate_n};
pub use parse::parse;
pub use tape::Tape;

use crate::error::EvalError;

pub fn evaluate(e: &Expr, t: f64) -> Result<f64, EvalError> {
    e.evaluate(t)
}
