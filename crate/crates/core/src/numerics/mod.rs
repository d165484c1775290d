//! Deterministic linear-algebra kernels: tridiagonal Thomas and Cholesky,
//! dense SPD Cholesky, cyclic Jacobi eigensolver and a one-sided Jacobi SVD.

mod dense;
mod eigen;
mod svd;
mod tridiagonal;

use thiserror::Error;

pub use dense::{solve_dense_spd, DenseCholesky, DenseMatrix};
pub use eigen::{sym_eig, SymEigResult, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub(crate) use svd::dot;
pub use svd::{left_singular_system, LeftSingularSystem, MAX_JACOBI_SWEEPS};
pub use tridiagonal::{
    cholesky_tridiagonal, solve_tridiagonal, BidiagonalCholesky, ThomasFactor, TridiagonalMatrix,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty matrix")]
    Empty,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("zero pivot at row {index}")]
    ZeroPivot { index: usize },
    #[error("matrix not positive definite (pivot {index})")]
    NotPositiveDefinite { index: usize },
    #[error("matrix not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("no convergence after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

pub type Result<T, E = NumericsError> = std::result::Result<T, E>;

pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
