use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest number of entries a Kronecker product may produce by default.
pub const DEFAULT_SIZE_CAP: usize = 1 << 20;

fn check_finite(data: &[C64]) -> Result<()> {
    match data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// A vector in `C^dim`.
#[derive(Clone, PartialEq)]
pub struct CVector {
    data: Vec<C64>,
}

impl CVector {
    pub fn new(data: Vec<C64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::ZeroDimension);
        }
        check_finite(&data)?;
        Ok(Self { data })
    }

    pub(crate) fn from_raw(data: Vec<C64>) -> Self {
        debug_assert!(!data.is_empty());
        Self { data }
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Self::from_raw(vec![C64::new(0.0, 0.0); dim])
    }

    /// The `i`-th standard basis vector of `C^dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[i] = C64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C64> {
        self.data.iter()
    }

    fn same_dim(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// `⟨self, other⟩ = Σ selfᵢ·conj(otherᵢ)`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.same_dim(other, "inner product")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self::from_raw(self.data.iter().map(|z| z * alpha).collect())
    }

    pub fn conj(&self) -> Self {
        Self::from_raw(self.data.iter().map(|z| z.conj()).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other, "vector addition")?;
        Ok(Self::from_raw(
            self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other, "vector subtraction")?;
        Ok(Self::from_raw(
            self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        ))
    }

    /// `self += alpha·other`, dimensions assumed equal.
    pub(crate) fn axpy(&mut self, alpha: C64, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// View as a `dim × 1` column matrix.
    pub fn to_column(&self) -> CMatrix {
        CMatrix::from_raw(self.dim(), 1, self.data.clone())
    }
}

impl Index<usize> for CVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.iter()).finish()
    }
}

/// A dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::DimensionMismatch {
                context: "matrix row length",
                expected: m,
                found: bad.len(),
            });
        }
        Self::new(n, m, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_raw(rows, cols, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[CVector]) -> Result<Self> {
        let first = columns.first().ok_or(Error::EmptyFamily)?;
        let rows = first.dim();
        if let Some(bad) = columns.iter().find(|c| c.dim() != rows) {
            return Err(Error::DimensionMismatch {
                context: "matrix columns",
                expected: rows,
                found: bad.dim(),
            });
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| C64::new(if i == j { diag[i] } else { 0.0 }, 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> CVector {
        CVector::from_raw(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector::from_raw((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|z| z.conj()).collect())
    }

    /// Conjugate transpose `aᴴ`.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|z| z * alpha).collect())
    }

    fn same_shape(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                context,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "matrix addition")?;
        Ok(Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "matrix subtraction")?;
        Ok(Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                context: "matrix product",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = vec![C64::new(0.0, 0.0); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out[i * other.cols..(i + 1) * other.cols].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::from_raw(self.rows, other.cols, out))
    }

    pub fn mul_vec(&self, x: &CVector) -> Result<CVector> {
        if self.cols != x.dim() {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: x.dim(),
            });
        }
        Ok(CVector::from_raw(
            (0..self.rows)
                .map(|i| {
                    self.data[i * self.cols..(i + 1) * self.cols]
                        .iter()
                        .zip(x.as_slice())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        ))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖a − aᴴ‖_F`; zero for exactly Hermitian input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `(a + aᴴ)/2`.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other, "matrix comparison")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Row-major flattening: entry `(i, j)` lands at `i·cols + j`.
    pub fn flatten_row_major(&self) -> CVector {
        CVector::from_raw(self.data.clone())
    }

    pub fn unflatten_row_major(v: &CVector, rows: usize, cols: usize) -> Result<Self> {
        if v.dim() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "unflatten",
                expected: rows * cols,
                found: v.dim(),
            });
        }
        Self::new(rows, cols, v.as_slice().to_vec())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Kronecker product with the default size cap.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    kron_capped(a, b, DEFAULT_SIZE_CAP)
}

/// Kronecker product; block `(i, j)` of the result is `a[i, j]·b`.
pub fn kron_capped(a: &CMatrix, b: &CMatrix, cap: usize) -> Result<CMatrix> {
    let rows = a.rows.checked_mul(b.rows);
    let cols = a.cols.checked_mul(b.cols);
    let entries = rows.zip(cols).and_then(|(r, c)| r.checked_mul(c));
    let (rows, cols) = match entries {
        Some(e) if e <= cap => (rows.unwrap_or(0), cols.unwrap_or(0)),
        _ => {
            return Err(Error::SizeCap {
                entries: entries.unwrap_or(usize::MAX),
                cap,
            })
        }
    };
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
    }))
}

/// Frobenius (Hilbert–Schmidt) inner product `Σᵢⱼ a[i,j]·conj(b[i,j])`.
pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> Result<C64> {
    a.same_shape(b, "Frobenius inner product")?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x * y.conj()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_of_diagonals_is_diagonal() {
        let d = CMatrix::from_diag(&[1.0, 2.0]);
        assert_eq!(kron(&d, &d).unwrap(), CMatrix::from_diag(&[1.0, 2.0, 2.0, 4.0]));
    }

    #[test]
    fn kron_of_basis_vectors() {
        let e1 = CVector::basis(2, 0).to_column();
        let e2 = CVector::basis(2, 1).to_column();
        let k = kron(&e1, &e2).unwrap();
        assert_eq!(k.shape(), (4, 1));
        assert_eq!(k.column(0), CVector::basis(4, 1));
    }

    #[test]
    fn kron_identity_is_block_diagonal() {
        let b = CMatrix::from_rows(&[vec![c(1.0, 2.0), c(3.0, 0.0)], vec![c(0.0, -1.0), c(5.0, 5.0)]])
            .unwrap();
        let k = kron(&CMatrix::identity(2), &b).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i / 2 == j / 2 { b[(i % 2, j % 2)] } else { c(0.0, 0.0) };
                assert_eq!(k[(i, j)], expected);
            }
        }
    }

    #[test]
    fn kron_respects_cap() {
        let a = CMatrix::zeros(4, 4);
        assert!(matches!(kron_capped(&a, &a, 255), Err(Error::SizeCap { entries: 256, cap: 255 })));
        assert!(kron_capped(&a, &a, 256).is_ok());
    }

    #[test]
    fn frobenius_examples() {
        let e11 = CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let e12 = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(frobenius_inner(&e11, &e12).unwrap(), c(0.0, 0.0));

        let m = CMatrix::from_real(2, 2, &[2.0, 5.0, 7.0, 3.0]).unwrap();
        assert_eq!(frobenius_inner(&CMatrix::identity(2), &m).unwrap(), c(5.0, 0.0));

        let z = CMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.0, -3.0)]]).unwrap();
        let self_inner = frobenius_inner(&z, &z).unwrap();
        assert!((self_inner.re - z.frobenius_norm().powi(2)).abs() < 1e-14);
        assert_eq!(self_inner.im, 0.0);
    }

    #[test]
    fn frobenius_shape_mismatch() {
        let a = CMatrix::zeros(2, 3);
        let b = CMatrix::zeros(3, 2);
        assert!(matches!(frobenius_inner(&a, &b), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(matches!(
            CMatrix::new(2, 2, vec![c(0.0, 0.0); 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            CVector::new(vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { index: 0 })
        ));
        assert!(matches!(CVector::new(vec![]), Err(Error::ZeroDimension)));
    }

    #[test]
    fn row_major_flattening_of_outer_product_is_kron() {
        let x = CVector::new(vec![c(1.0, 1.0), c(2.0, 0.0)]).unwrap();
        let y = CVector::new(vec![c(0.0, 1.0), c(3.0, 0.0), c(-1.0, 0.5)]).unwrap();
        let outer = x.to_column().matmul(&y.to_column().transpose()).unwrap();
        let k = kron(&x.to_column(), &y.to_column()).unwrap();
        assert_eq!(outer.flatten_row_major(), k.column(0));
    }

    #[test]
    fn inner_product_is_linear_in_first_slot() {
        let x = CVector::new(vec![c(1.0, 2.0), c(0.0, 1.0)]).unwrap();
        let y = CVector::new(vec![c(3.0, -1.0), c(2.0, 2.0)]).unwrap();
        let a = c(0.0, 1.0);
        let lhs = x.scale(a).inner(&y).unwrap();
        let rhs = a * x.inner(&y).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        let lhs2 = x.inner(&y.scale(a)).unwrap();
        assert!((lhs2 - a.conj() * x.inner(&y).unwrap()).norm() < 1e-14);
    }
}
