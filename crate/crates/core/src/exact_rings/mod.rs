//! Exact arithmetic in imaginary quadratic fields and the split algebra, plus the
//! matrix notations (`m'`, `m^#`, `*m`) used throughout the crate.

mod algebra;
mod hermitian;
mod matrix;
mod norms;
pub mod rational;
pub mod text;

pub use algebra::{EElem, QuadAlgebra};
pub use hermitian::HermMat2;
pub use matrix::{j2, prime, sharp, CMat, Mat, MatE, QMat, Scalar};
pub use norms::{hilbert_symbol, is_norm_from_e};
pub use rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not a positive squarefree integer")]
    NotSquarefree(u64),
    #[error("operation needs the split algebra")]
    NotSplit,
    #[error("zero is not allowed here")]
    ZeroNotAllowed,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("value too large for this operation: {0}")]
    Overflow(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}
