//! Min-plus semiring scalars and dense matrices.
//!
//! ⊕ is `min` with neutral element ε = +∞, ⊗ is `+` with neutral element
//! e = 0. Matrices support products, the Kleene star, circuit-weight checks
//! and the affine fixed point `x = A ⊗ x ⊕ b`.

mod matrix;
mod scalar;

use thiserror::Error;

pub use matrix::{
    affine_solve, check_circuits_positive, kleene_star, mat_mul, CircuitCheck, MinPlusMatrix,
};
pub use scalar::{oplus, otimes, MinPlusScalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinPlusError {
    #[error("value {0} is not a min-plus scalar (NaN and -inf are excluded)")]
    InvalidValue(f64),
    #[error("residuation by ε is undefined")]
    UndefinedResiduation,
    #[error("ε raised to the power {0} is undefined")]
    UndefinedPower(f64),
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix rows have different lengths")]
    RaggedRows,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("precedence graph has a circuit of nonpositive weight ({weight})")]
    NonPositiveCircuit { weight: f64 },
}
