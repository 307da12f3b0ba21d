use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::{CMatrix, CVector};
use crate::error::{Error, Result};

/// Generator used for every random instance; seeded explicitly by callers.
pub type FrameRng = ChaCha8Rng;

/// Column norms below this during orthogonalization signal rank deficiency.
pub const ORTHO_TOL: f64 = 1e-12;

pub fn seeded_rng(seed: u64) -> FrameRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut FrameRng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries (`E|z|² = 1`).
pub fn random_gaussian_matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
    random_gaussian_matrix_with(rows, cols, &mut seeded_rng(seed))
}

pub fn random_gaussian_matrix_with(rows: usize, cols: usize, rng: &mut FrameRng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_gaussian_vector(dim: usize, rng: &mut FrameRng) -> CVector {
    CVector::from_raw((0..dim).map(|_| gaussian(rng)).collect())
}

/// Orthonormalize the columns of `a` by modified Gram–Schmidt with one
/// reorthogonalization pass per column.
pub fn orthonormal_columns(a: &CMatrix) -> Result<CMatrix> {
    if a.rows() < a.cols() {
        return Err(Error::InvalidArgument(format!(
            "orthonormal_columns needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let mut q: Vec<CVector> = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        let mut v = a.column(j);
        for _pass in 0..2 {
            for prev in &q {
                let proj = v.inner(prev)?;
                v.axpy(-proj, prev);
            }
        }
        let norm = v.norm();
        if norm < ORTHO_TOL {
            return Err(Error::RankDeficient { column: j });
        }
        q.push(v.scale(C64::new(1.0 / norm, 0.0)));
    }
    CMatrix::from_columns(&q)
}
