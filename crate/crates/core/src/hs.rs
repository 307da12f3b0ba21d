//! Elements of `H ⊗ K` as Hilbert–Schmidt antilinear maps `K → H`.
//!
//! An element is stored as a `dim_h × dim_k` matrix `m` acting by
//! `T(y) = m·conj(y)`. With the inner product linear in its first slot, the
//! rest of the calculus is forced by that choice:
//!
//! - the simple tensor `(x ⊗ y)(y′) = ⟨y, y′⟩·x = x·(yᵀ·conj(y′))`, so its
//!   matrix is the unconjugated outer product `x·yᵀ`;
//! - `T(uⱼ)` is column `j` of `m` for the standard basis, so
//!   `⟨Q, T⟩ = Σⱼ ⟨Q uⱼ, T uⱼ⟩` is the Frobenius form `Σᵢⱼ qᵢⱼ·conj(tᵢⱼ)`;
//! - `⟨T y, x⟩ = Σᵢⱼ mᵢⱼ·conj(yⱼ)·conj(xᵢ)` must equal `⟨T* x, y⟩`, which
//!   gives the adjoint matrix as the plain transpose `mᵀ`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::frames::{frame_bounds, Frame};
use crate::numeric::{frobenius_inner, CMatrix, CVector};

#[derive(Clone, PartialEq)]
pub struct HSElement {
    m: CMatrix,
}

impl HSElement {
    pub fn new(m: CMatrix) -> Self {
        Self { m }
    }

    pub fn zero(dim_h: usize, dim_k: usize) -> Self {
        Self::new(CMatrix::zeros(dim_h, dim_k))
    }

    pub fn dim_h(&self) -> usize {
        self.m.rows()
    }

    pub fn dim_k(&self) -> usize {
        self.m.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.m.shape()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.m.add(&other.m)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.m.sub(&other.m)?))
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self::new(self.m.scale(alpha))
    }

    /// Row-major flattening into `C^(dim_h·dim_k)`; an isometry for the HS norm.
    pub fn flatten(&self) -> CVector {
        self.m.flatten_row_major()
    }

    pub fn unflatten(v: &CVector, dim_h: usize, dim_k: usize) -> Result<Self> {
        Ok(Self::new(CMatrix::unflatten_row_major(v, dim_h, dim_k)?))
    }

    fn check_shape(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                context,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }
}

impl std::fmt::Debug for HSElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HSElement({:?})", self.m)
    }
}

/// `x ⊗ y`, the map `y′ ↦ ⟨y, y′⟩·x`.
pub fn simple_tensor(x: &CVector, y: &CVector) -> HSElement {
    HSElement::new(CMatrix::from_fn(x.dim(), y.dim(), |i, j| x[i] * y[j]))
}

/// `T(y) = m·conj(y)`.
pub fn apply(t: &HSElement, y: &CVector) -> Result<CVector> {
    if y.dim() != t.dim_k() {
        return Err(Error::DimensionMismatch {
            context: "apply",
            expected: t.dim_k(),
            found: y.dim(),
        });
    }
    t.m.mul_vec(&y.conj())
}

/// The adjoint `T* : H → K`, again antilinear, with matrix `mᵀ`.
pub fn adjoint(t: &HSElement) -> HSElement {
    HSElement::new(t.m.transpose())
}

pub fn hs_inner(q: &HSElement, t: &HSElement) -> Result<C64> {
    q.check_shape(t, "Hilbert-Schmidt inner product")?;
    frobenius_inner(&q.m, &t.m)
}

pub fn hs_norm(t: &HSElement) -> f64 {
    t.m.frobenius_norm()
}

/// `Σⱼ ‖T uⱼ‖²` over the standard basis of `K`.
pub fn column_energy(t: &HSElement) -> f64 {
    (0..t.dim_k())
        .map(|j| {
            apply(t, &CVector::basis(t.dim_k(), j))
                .expect("basis vector has dim_k")
                .norm_sqr()
        })
        .sum()
}

/// `Σᵢ ‖T* eᵢ‖²` over the standard basis of `H`.
pub fn row_energy(t: &HSElement) -> f64 {
    column_energy(&adjoint(t))
}

/// Two reconstructions of `t` through orthonormal bases.
#[derive(Debug, Clone)]
pub struct Expansions {
    /// `Σ xₙ ⊗ T* xₙ` over a basis or frame of `H`.
    pub via_h: HSElement,
    /// `Σ T yₘ ⊗ yₘ` over a basis or frame of `K`.
    pub via_k: HSElement,
}

impl Expansions {
    /// Largest entrywise deviation of either reconstruction from `t`.
    pub fn max_error(&self, t: &HSElement) -> Result<f64> {
        Ok(self
            .via_h
            .m
            .max_abs_diff(&t.m)?
            .max(self.via_k.m.max_abs_diff(&t.m)?))
    }
}

fn expand_h(t: &HSElement, fh: &Frame) -> Result<HSElement> {
    let t_adj = adjoint(t);
    let mut acc = HSElement::zero(t.dim_h(), t.dim_k());
    for x in fh {
        acc = acc.add(&simple_tensor(x, &apply(&t_adj, x)?))?;
    }
    Ok(acc)
}

fn expand_k(t: &HSElement, fk: &Frame) -> Result<HSElement> {
    let mut acc = HSElement::zero(t.dim_h(), t.dim_k());
    for y in fk {
        acc = acc.add(&simple_tensor(&apply(t, y)?, y))?;
    }
    Ok(acc)
}

/// `T = Σᵢ eᵢ ⊗ T* eᵢ = Σⱼ T uⱼ ⊗ uⱼ` over the standard bases.
pub fn expand_basis(t: &HSElement) -> Expansions {
    let eh = Frame::standard_basis(t.dim_h());
    let ek = Frame::standard_basis(t.dim_k());
    Expansions {
        via_h: expand_h(t, &eh).expect("standard basis has dim_h"),
        via_k: expand_k(t, &ek).expect("standard basis has dim_k"),
    }
}

fn require_normalized_tight(f: &Frame, dim: usize, context: &'static str) -> Result<()> {
    if f.dim() != dim {
        return Err(Error::DimensionMismatch {
            context,
            expected: dim,
            found: f.dim(),
        });
    }
    let b = frame_bounds(f)?;
    if !b.is_normalized_tight {
        return Err(Error::NotNormalizedTight {
            lower: b.lower,
            upper: b.upper,
        });
    }
    Ok(())
}

/// `T = Σₙ xₙ ⊗ T* xₙ = Σₘ T yₘ ⊗ yₘ` for normalized tight frames of `H` and `K`.
pub fn expand_tight(t: &HSElement, fh: &Frame, fk: &Frame) -> Result<Expansions> {
    require_normalized_tight(fh, t.dim_h(), "expand_tight frame for H")?;
    require_normalized_tight(fk, t.dim_k(), "expand_tight frame for K")?;
    Ok(Expansions {
        via_h: expand_h(t, fh)?,
        via_k: expand_k(t, fk)?,
    })
}

/// `Σₘ ⟨Q yₘ, T yₘ⟩` for a normalized tight frame `{yₘ}` of `K`.
pub fn tight_inner(q: &HSElement, t: &HSElement, fk: &Frame) -> Result<C64> {
    q.check_shape(t, "tight_inner")?;
    require_normalized_tight(fk, t.dim_k(), "tight_inner frame for K")?;
    fk.iter().try_fold(C64::new(0.0, 0.0), |acc, y| {
        Ok(acc + apply(q, y)?.inner(&apply(t, y)?)?)
    })
}

/// `Σₘ ‖T yₘ‖²` for a normalized tight frame `{yₘ}` of `K`.
pub fn tight_energy(t: &HSElement, fk: &Frame) -> Result<f64> {
    require_normalized_tight(fk, t.dim_k(), "tight_energy frame for K")?;
    fk.iter()
        .try_fold(0.0, |acc, y| Ok(acc + apply(t, y)?.norm_sqr()))
}

/// `Σₘ ‖T yₘ‖²` for an arbitrary family `{yₘ}` of `K`.
pub fn frame_column_energy(t: &HSElement, fk: &Frame) -> Result<f64> {
    fk.iter()
        .try_fold(0.0, |acc, y| Ok(acc + apply(t, y)?.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{random_gaussian_matrix, random_gaussian_vector, seeded_rng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn vreal(v: &[f64]) -> CVector {
        CVector::from_real(v).unwrap()
    }

    fn normalized_mercedes() -> Frame {
        let s = (2.0f64 / 3.0).sqrt();
        let h = 3f64.sqrt() / 2.0;
        Frame::new(vec![
            vreal(&[s, 0.0]),
            vreal(&[-0.5 * s, h * s]),
            vreal(&[-0.5 * s, -h * s]),
        ])
        .unwrap()
    }

    #[test]
    fn simple_tensor_examples() {
        let t = simple_tensor(&CVector::basis(2, 0), &CVector::basis(2, 1));
        assert_eq!(t.matrix(), &CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap());

        let t = simple_tensor(&vreal(&[3.0, 0.0]), &vreal(&[0.0, 4.0]));
        assert!((hs_norm(&t) - 12.0).abs() < 1e-14);

        let t = simple_tensor(&vreal(&[1.0, 2.0]), &CVector::zeros(3));
        assert_eq!(t, HSElement::zero(2, 3));
    }

    #[test]
    fn apply_examples() {
        let t = simple_tensor(&CVector::basis(2, 0), &CVector::basis(2, 1));
        let y = CVector::new(vec![c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(apply(&t, &y).unwrap(), CVector::new(vec![c(0.0, -1.0), c(0.0, 0.0)]).unwrap());

        let m = random_gaussian_matrix(3, 2, 1);
        let t = HSElement::new(m.clone());
        for j in 0..2 {
            assert_eq!(apply(&t, &CVector::basis(2, j)).unwrap(), m.column(j));
        }

        let y = random_gaussian_vector(2, &mut seeded_rng(2));
        let lhs = apply(&t, &y.scale(c(0.0, 1.0))).unwrap();
        let rhs = apply(&t, &y).unwrap().scale(c(0.0, -1.0));
        assert!(lhs.distance(&rhs).unwrap() < 1e-14);

        assert!(matches!(apply(&t, &CVector::zeros(3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn adjoint_example_satisfies_defining_identity() {
        let m = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 2.0)], vec![c(0.0, 0.0), c(3.0, 0.0)]])
            .unwrap();
        let t = HSElement::new(m);
        let ta = adjoint(&t);
        let expected = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 2.0), c(3.0, 0.0)]])
            .unwrap();
        assert_eq!(ta.matrix(), &expected);
        for i in 0..2 {
            for j in 0..2 {
                let x = CVector::basis(2, i);
                let y = CVector::basis(2, j);
                let lhs = apply(&ta, &x).unwrap().inner(&y).unwrap();
                let rhs = apply(&t, &y).unwrap().inner(&x).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(adjoint(&ta), t);
    }

    #[test]
    fn adjoint_of_simple_tensor_swaps_factors() {
        let mut rng = seeded_rng(3);
        let x = random_gaussian_vector(3, &mut rng);
        let y = random_gaussian_vector(2, &mut rng);
        assert_eq!(adjoint(&simple_tensor(&x, &y)), simple_tensor(&y, &x));
        let d = HSElement::new(CMatrix::from_diag(&[1.0, -2.0]));
        assert_eq!(adjoint(&d), d);
    }

    #[test]
    fn inner_product_examples() {
        let x = vreal(&[1.0, 0.0]);
        let xp = vreal(&[0.0, 1.0]);
        let y = vreal(&[0.3, 0.7]);
        let v = hs_inner(&simple_tensor(&x, &y), &simple_tensor(&xp, &y)).unwrap();
        assert_eq!(v, c(0.0, 0.0));

        let t = HSElement::new(random_gaussian_matrix(3, 4, 4));
        assert!((hs_norm(&adjoint(&t)) - hs_norm(&t)).abs() < 1e-14);
        let direct = hs_inner(&t, &t).unwrap();
        assert!((direct.re - column_energy(&t)).abs() < 1e-12);
        assert!((column_energy(&t) - row_energy(&t)).abs() < 1e-12);

        assert!(matches!(
            hs_inner(&t, &HSElement::zero(4, 3)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn basis_expansion_examples() {
        let id = HSElement::new(CMatrix::identity(2));
        let e = expand_basis(&id);
        assert_eq!(e.via_h, id);
        assert_eq!(e.via_k, id);

        let t = HSElement::new(random_gaussian_matrix(3, 2, 5));
        assert!(expand_basis(&t).max_error(&t).unwrap() <= 1e-12);

        let mut rng = seeded_rng(6);
        let r1 = simple_tensor(&random_gaussian_vector(2, &mut rng), &random_gaussian_vector(3, &mut rng));
        assert!(expand_basis(&r1).via_k.matrix().max_abs_diff(r1.matrix()).unwrap() <= 1e-12);
    }

    #[test]
    fn tight_expansion_examples() {
        let t = HSElement::new(random_gaussian_matrix(2, 2, 7));
        let onb = Frame::standard_basis(2);
        let a = expand_tight(&t, &onb, &onb).unwrap();
        let b = expand_basis(&t);
        assert_eq!(a.via_h, b.via_h);
        assert_eq!(a.via_k, b.via_k);

        let merc = normalized_mercedes();
        let e = expand_tight(&t, &merc, &onb).unwrap();
        assert!(e.max_error(&t).unwrap() <= 1e-10 * hs_norm(&t));

        let z = HSElement::zero(2, 2);
        let e = expand_tight(&z, &merc, &merc).unwrap();
        assert!(e.max_error(&z).unwrap() <= 1e-15);

        let unnormalized = crate::frames::scale_frame(&merc, c(2.0, 0.0)).unwrap();
        assert!(matches!(
            expand_tight(&t, &unnormalized, &onb),
            Err(Error::NotNormalizedTight { .. })
        ));
    }

    #[test]
    fn tight_inner_examples() {
        let id = HSElement::new(CMatrix::identity(2));
        let v = tight_inner(&id, &id, &normalized_mercedes()).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-14);

        let q = HSElement::new(random_gaussian_matrix(3, 2, 8));
        let t = HSElement::new(random_gaussian_matrix(3, 2, 9));
        let onb = Frame::standard_basis(2);
        let lhs = tight_inner(&q, &t, &onb).unwrap();
        assert!((lhs - hs_inner(&q, &t).unwrap()).norm() < 1e-13);

        let e1 = CVector::basis(2, 0);
        let e2 = CVector::basis(2, 1);
        let v = tight_inner(&simple_tensor(&e1, &e1), &simple_tensor(&e1, &e2), &normalized_mercedes())
            .unwrap();
        assert!(v.norm() < 1e-15);

        assert!(matches!(
            tight_inner(&q, &t, &Frame::new(vec![e1]).unwrap()),
            Err(Error::NotNormalizedTight { .. })
        ));
    }

    #[test]
    fn tight_energy_examples() {
        let t = HSElement::new(random_gaussian_matrix(2, 2, 10));
        let onb = Frame::standard_basis(2);
        let a = tight_energy(&t, &onb).unwrap();
        let b = tight_energy(&t, &normalized_mercedes()).unwrap();
        assert!((a - hs_norm(&t).powi(2)).abs() <= 1e-12);
        assert!((a - b).abs() <= 1e-10 * a);

        let x = vreal(&[1.0, 2.0]);
        let y = vreal(&[3.0, -1.0]);
        let e = tight_energy(&simple_tensor(&x, &y), &normalized_mercedes()).unwrap();
        assert!((e - 50.0).abs() < 1e-12);
    }
}
