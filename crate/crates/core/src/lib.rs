//! Legendre curves in the plane: curvature pairs, evolutes of fronts and
//! frontals, vertices, and four-vertex diagnostics.

pub mod analysis;
pub mod catalog;
pub mod error;
pub mod events;
pub mod evolute;
pub mod expr;
pub mod legendre;
pub mod numerics;

pub use error::{Error, EvalError, ParseError, Result};
