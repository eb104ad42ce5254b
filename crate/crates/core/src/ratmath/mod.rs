//! Exact rational scalars and dense matrices.
//!
//! Everything that decides a classification (signs, zero tests, ranks,
//! compatibility) goes through these types; floating point only enters in
//! [`crate::spectral`].

mod matrix;
mod rational;

pub use matrix::{RatMatrix, RowEchelon};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MathError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("parse error: {0}")]
    Parse(String),
}

impl MathError {
    /// Stable machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            MathError::DivisionByZero => "DivisionByZero",
            MathError::Shape(_) => "ShapeError",
            MathError::SingularMatrix => "SingularMatrix",
            MathError::Parse(_) => "ParseError",
        }
    }
}
