use num_complex::Complex64 as C64;

use super::matrix::CMatrix;
use super::scaled_tol;
use crate::error::{Error, Result};

/// Cholesky pivots must exceed this fraction of `‖a‖_F`.
pub const PD_TOL: f64 = 1e-13;

/// Lower-triangular `L` with `a = L·Lᴴ`.
fn cholesky(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let pivot_floor = scaled_tol(PD_TOL, a.frobenius_norm());
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > pivot_floor) {
            return Err(Error::NotHpd { pivot: j, value: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = C64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Solve `a·x = b` for Hermitian positive definite `a`.
pub fn hpd_solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "hpd_solve right-hand side",
            expected: a.rows(),
            found: b.rows(),
        });
    }
    let l = cholesky(a)?;
    let n = a.rows();
    let mut x = b.clone();
    for col in 0..b.cols() {
        // L·z = b
        for i in 0..n {
            let mut s = x[(i, col)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)];
        }
        // Lᴴ·x = z
        for i in (0..n).rev() {
            let mut s = x[(i, col)];
            for k in (i + 1)..n {
                s -= l[(k, i)].conj() * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)];
        }
    }
    Ok(x)
}

pub fn hpd_inverse(a: &CMatrix) -> Result<CMatrix> {
    hpd_solve(a, &CMatrix::identity(a.rows()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::random::random_gaussian_matrix;

    #[test]
    fn diagonal_inverse() {
        let inv = hpd_inverse(&CMatrix::from_diag(&[1.0, 2.0])).unwrap();
        assert!(inv.max_abs_diff(&CMatrix::from_diag(&[1.0, 0.5])).unwrap() < 1e-15);
    }

    #[test]
    fn hilbert_two_by_two_inverse() {
        // det = 1/12, adjugate / det
        let a = CMatrix::from_real(2, 2, &[1.0, 0.5, 0.5, 1.0 / 3.0]).unwrap();
        let expected = CMatrix::from_real(2, 2, &[4.0, -6.0, -6.0, 12.0]).unwrap();
        assert!(hpd_inverse(&a).unwrap().max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let b = random_gaussian_matrix(3, 2, 11);
        assert_eq!(hpd_solve(&CMatrix::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn rejects_indefinite_and_mismatched() {
        let a = CMatrix::from_diag(&[1.0, -1.0]);
        assert!(matches!(hpd_inverse(&a), Err(Error::NotHpd { pivot: 1, .. })));
        let singular = CMatrix::from_diag(&[1.0, 0.0]);
        assert!(matches!(hpd_inverse(&singular), Err(Error::NotHpd { .. })));
        assert!(matches!(
            hpd_solve(&CMatrix::identity(2), &CMatrix::zeros(3, 1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn complex_round_trip() {
        let g = random_gaussian_matrix(4, 4, 5);
        let a = g
            .conj_transpose()
            .matmul(&g)
            .unwrap()
            .add(&CMatrix::identity(4))
            .unwrap();
        let b = random_gaussian_matrix(4, 3, 6);
        let x = hpd_solve(&a, &b).unwrap();
        let resid = a.matmul(&x).unwrap().sub(&b).unwrap().frobenius_norm();
        assert!(resid <= 1e-10 * a.frobenius_norm() * x.frobenius_norm());
    }
}
