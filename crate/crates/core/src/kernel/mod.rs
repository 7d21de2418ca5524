//! Exact arithmetic and linear algebra over the rationals.

mod linalg;
mod matrix;
mod scalar;
mod sparse;

pub use linalg::{
    invert, kernel_basis, quotient_presentation, rank, solve_linear, Quotient, RowEchelon,
};
pub use matrix::Matrix;
pub use scalar::{ParseScalarError, Scalar};
pub use sparse::SparseVec;

pub(crate) use sparse::Accumulator;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("matrix of shape {0:?} is not square")]
    NotSquare((usize, usize)),
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
}
