//! Dense complex linear algebra for small matrices.
//!
//! Everything here is self-contained: a cyclic complex Jacobi eigensolver for
//! Hermitian matrices, a Cholesky solver for Hermitian positive definite
//! systems, Kronecker products under the row-major flattening convention and
//! seeded Gaussian generators.
//!
//! Relative tolerances are scaled by the Frobenius norm of the operand, with
//! that norm floored at [`NORM_FLOOR`] so zero operands do not produce a zero
//! threshold.

mod cholesky;
mod eig;
mod matrix;
mod random;

pub use cholesky::{hpd_inverse, hpd_solve, PD_TOL};
pub use eig::{
    hermitian_eig, operator_norm_2, singular_value_extremes, HermitianEig, HERM_TOL,
    JACOBI_CONVERGENCE, MAX_SWEEPS, TOL_EIG,
};
pub use matrix::{frobenius_inner, kron, kron_capped, CMatrix, CVector, DEFAULT_SIZE_CAP};
pub use random::{
    orthonormal_columns, random_gaussian_matrix, random_gaussian_matrix_with, random_gaussian_vector,
    seeded_rng, FrameRng, ORTHO_TOL,
};

pub use num_complex::Complex64 as C64;

/// Floor applied to operand norms when forming relative tolerances.
pub const NORM_FLOOR: f64 = 1e-14;

/// `tol · max(norm, NORM_FLOOR)`.
#[inline]
pub fn scaled_tol(tol: f64, norm: f64) -> f64 {
    tol * norm.max(NORM_FLOOR)
}
