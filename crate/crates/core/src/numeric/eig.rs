use num_complex::Complex64 as C64;

use super::matrix::CMatrix;
use super::scaled_tol;
use crate::error::{Error, Result};

/// Admissible asymmetry `‖a − aᴴ‖_F`, relative to `‖a‖_F`.
pub const HERM_TOL: f64 = 1e-12;
/// Reconstruction and eigen-residual tolerance, relative to `‖a‖_F`.
pub const TOL_EIG: f64 = 1e-10;
/// Sweeps stop once the off-diagonal Frobenius mass falls below this fraction of `‖a‖_F`.
pub const JACOBI_CONVERGENCE: f64 = 1e-14;
pub const MAX_SWEEPS: usize = 60;

/// Eigendecomposition `a = V·diag(λ)·Vᴴ` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: CMatrix,
}

impl HermitianEig {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `V·diag(λ)·Vᴴ`.
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.eigenvectors;
        let n = self.dim();
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                .sum()
        })
    }
}

fn off_diagonal_mass(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic complex Jacobi eigensolver.
///
/// The input is symmetrized as `(a + aᴴ)/2` before rotating. Each rotation
/// first removes the phase of the pivot `a[p, q] = r·e^{iφ}` and then applies
/// the real symmetric Jacobi rotation to the resulting real 2×2 block, so the
/// combined unitary acting on columns `(p, q)` is
///
/// ```text
/// [ c              s            ]
/// [ -s·e^{-iφ}     c·e^{-iφ}    ]
/// ```
pub fn hermitian_eig(a: &CMatrix) -> Result<HermitianEig> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let norm = a.frobenius_norm();
    let defect = a.hermitian_defect();
    let herm_tol = scaled_tol(HERM_TOL, norm);
    if defect > herm_tol {
        return Err(Error::NotHermitian {
            asymmetry: defect,
            tolerance: herm_tol,
        });
    }

    let n = a.rows();
    let mut m = a.symmetrized();
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
    }
    let mut v = CMatrix::identity(n);
    let threshold = JACOBI_CONVERGENCE * norm;

    let mut converged = off_diagonal_mass(&m) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_mass(&m) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Skip pivots that are already negligible against both diagonal entries.
    if r < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = C64::new(0.0, 0.0);
        m[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / r;
    let zeta = (aqq - app) / (2.0 * r);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e = phase.conj();
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = e * (-s);
    let u_qq = e * c;

    let n = m.rows();
    // m ← m·U
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * u_pp + mkq * u_qp;
        m[(k, q)] = mkp * u_pq + mkq * u_qq;
    }
    // m ← Uᴴ·m
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = u_pp.conj() * mpk + u_qp.conj() * mqk;
        m[(q, k)] = u_pq.conj() * mpk + u_qq.conj() * mqk;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(app - t * r, 0.0);
    m[(q, q)] = C64::new(aqq + t * r, 0.0);
    // v ← v·U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Spectral norm `sqrt(λ_max(aᴴa))`.
pub fn operator_norm_2(a: &CMatrix) -> f64 {
    singular_value_extremes(a).1
}

/// Smallest and largest singular values, from the spectrum of `aᴴa`.
pub fn singular_value_extremes(a: &CMatrix) -> (f64, f64) {
    let gram = a
        .conj_transpose()
        .matmul(a)
        .expect("aᴴ·a is always conformable");
    // aᴴa is Hermitian by construction, so the solver cannot reject it; Jacobi
    // convergence on matrices of this size is reached in a handful of sweeps.
    let eig = hermitian_eig(&gram).expect("Jacobi sweep on a Gram matrix");
    (eig.min().max(0.0).sqrt(), eig.max().max(0.0).sqrt())
}
