//! Frames of a single space `C^dim`.
//!
//! A [`Frame`] is any nonempty ordered family of vectors of the same
//! dimension; whether it actually spans (is a frame) is decided by
//! [`frame_bounds`]. Bounds are always the optimal pair: the extreme
//! eigenvalues of the frame operator `S = Σₙ xₙ·xₙᴴ`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numeric::{
    hermitian_eig, hpd_inverse, orthonormal_columns, random_gaussian_matrix_with,
    random_gaussian_vector, seeded_rng, CMatrix, CVector, FrameRng,
};

/// Relative threshold `lower > EPS_FRAME·upper` for classifying a frame.
pub const EPS_FRAME: f64 = 1e-10;
/// Relative spread `upper − lower ≤ EPS_TIGHT·upper` for classifying tightness.
pub const EPS_TIGHT: f64 = 1e-10;
/// Distance of the common bound from 1 for a normalized tight frame.
pub const EPS_NORMALIZED: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct Frame {
    dim: usize,
    vectors: Vec<CVector>,
}

impl Frame {
    pub fn new(vectors: Vec<CVector>) -> Result<Self> {
        let dim = vectors.first().ok_or(Error::EmptyFamily)?.dim();
        if let Some(bad) = vectors.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                context: "frame vectors",
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { dim, vectors })
    }

    /// The standard basis of `C^dim`.
    pub fn standard_basis(dim: usize) -> Self {
        Self {
            dim,
            vectors: (0..dim).map(|i| CVector::basis(dim, i)).collect(),
        }
    }

    /// Frame made of the columns of `m`.
    pub fn from_columns(m: &CMatrix) -> Self {
        Self {
            dim: m.rows(),
            vectors: (0..m.cols()).map(|j| m.column(j)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CVector> {
        self.vectors.iter()
    }

    pub fn into_vectors(self) -> Vec<CVector> {
        self.vectors
    }

    /// Apply `f` to every vector, keeping order.
    pub fn map(&self, f: impl FnMut(&CVector) -> CVector) -> Result<Self> {
        Self::new(self.vectors.iter().map(f).collect())
    }

    /// Largest Euclidean distance between corresponding vectors.
    pub fn max_distance(&self, other: &Frame) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                context: "frame comparison",
                expected: self.len(),
                found: other.len(),
            });
        }
        self.vectors
            .iter()
            .zip(&other.vectors)
            .try_fold(0.0f64, |acc, (a, b)| Ok(acc.max(a.distance(b)?)))
    }

    fn check_vector(&self, x: &CVector, context: &'static str) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }
}

impl std::fmt::Debug for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Frame")
            .field("dim", &self.dim)
            .field("vectors", &self.vectors)
            .finish()
    }
}

impl<'a> IntoIterator for &'a Frame {
    type Item = &'a CVector;
    type IntoIter = std::slice::Iter<'a, CVector>;
    fn into_iter(self) -> Self::IntoIter {
        self.vectors.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_normalized_tight: bool,
}

impl FrameBounds {
    /// Classify a pair of extreme eigenvalues. Tiny negative roundoff is clamped to zero.
    pub fn classify(lower: f64, upper: f64) -> Self {
        let upper = upper.max(0.0);
        let lower = lower.clamp(0.0, upper);
        let is_frame = upper > 0.0 && lower > EPS_FRAME * upper;
        let is_tight = is_frame && (upper - lower) <= EPS_TIGHT * upper;
        let is_normalized_tight = is_tight && (upper - 1.0).abs() <= EPS_NORMALIZED;
        Self {
            lower,
            upper,
            is_frame,
            is_tight,
            is_normalized_tight,
        }
    }

    /// Condition number `upper / lower`; infinite for non-frames.
    pub fn ratio(&self) -> f64 {
        if self.is_frame {
            self.upper / self.lower
        } else {
            f64::INFINITY
        }
    }
}

/// The frame operator `S = Σₙ xₙ·xₙᴴ`, Hermitian positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOperatorMatrix {
    pub matrix: CMatrix,
}

impl FrameOperatorMatrix {
    pub fn bounds(&self) -> Result<FrameBounds> {
        let eig = hermitian_eig(&self.matrix)?;
        Ok(FrameBounds::classify(eig.min(), eig.max()))
    }

    pub fn apply(&self, x: &CVector) -> Result<CVector> {
        self.matrix.mul_vec(x)
    }
}

pub fn frame_operator(f: &Frame) -> FrameOperatorMatrix {
    let d = f.dim();
    let mut s = CMatrix::zeros(d, d);
    for x in f {
        for i in 0..d {
            for j in 0..=i {
                s[(i, j)] += x[i] * x[j].conj();
            }
        }
    }
    for i in 0..d {
        s[(i, i)] = C64::new(s[(i, i)].re, 0.0);
        for j in 0..i {
            s[(j, i)] = s[(i, j)].conj();
        }
    }
    FrameOperatorMatrix { matrix: s }
}

pub fn frame_bounds(f: &Frame) -> Result<FrameBounds> {
    frame_operator(f).bounds()
}

/// Analysis coefficients `(⟨x, xₙ⟩)ₙ`.
pub fn analysis(f: &Frame, x: &CVector) -> Result<CVector> {
    f.check_vector(x, "analysis")?;
    let coeffs = f.iter().map(|xn| x.inner(xn)).collect::<Result<Vec<_>>>()?;
    CVector::new(coeffs)
}

/// Synthesis `Σₙ cₙ·xₙ`.
pub fn synthesis(f: &Frame, c: &CVector) -> Result<CVector> {
    if c.dim() != f.len() {
        return Err(Error::DimensionMismatch {
            context: "synthesis coefficients",
            expected: f.len(),
            found: c.dim(),
        });
    }
    let mut out = CVector::zeros(f.dim());
    for (cn, xn) in c.iter().zip(f) {
        out.axpy(*cn, xn);
    }
    Ok(out)
}

/// `Σₙ |⟨x, xₙ⟩|²`.
pub fn frame_energy(f: &Frame, x: &CVector) -> Result<f64> {
    Ok(analysis(f, x)?.norm_sqr())
}

/// Canonical dual `{S⁻¹xₙ}`.
pub fn canonical_dual(f: &Frame) -> Result<Frame> {
    let s = frame_operator(f);
    let bounds = s.bounds()?;
    if !bounds.is_frame {
        return Err(Error::NotAFrame {
            lower: bounds.lower,
            upper: bounds.upper,
        });
    }
    let s_inv = hpd_inverse(&s.matrix)?;
    f.map(|x| s_inv.mul_vec(x).expect("S⁻¹ has the frame dimension"))
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// `Σₙ ⟨x, x′ₙ⟩·xₙ`.
    pub x_hat: CVector,
    /// `Σₙ ⟨x, xₙ⟩·x′ₙ`.
    pub x_hat_dual: CVector,
    pub residual_primal: f64,
    pub residual_dual: f64,
    /// Larger of the two relative residuals.
    pub residual: f64,
}

/// Reconstruct `x` through both canonical-dual expansions.
pub fn reconstruct(f: &Frame, x: &CVector) -> Result<Reconstruction> {
    f.check_vector(x, "reconstruct")?;
    let dual = canonical_dual(f)?;
    reconstruct_with_dual(f, &dual, x)
}

pub fn reconstruct_with_dual(f: &Frame, dual: &Frame, x: &CVector) -> Result<Reconstruction> {
    f.check_vector(x, "reconstruct")?;
    let x_hat = synthesis(f, &analysis(dual, x)?)?;
    let x_hat_dual = synthesis(dual, &analysis(f, x)?)?;
    let scale = x.norm().max(1e-14);
    let residual_primal = x_hat.distance(x)? / scale;
    let residual_dual = x_hat_dual.distance(x)? / scale;
    Ok(Reconstruction {
        x_hat,
        x_hat_dual,
        residual_primal,
        residual_dual,
        residual: residual_primal.max(residual_dual),
    })
}

/// `{λ·xₙ}`.
pub fn scale_frame(f: &Frame, lambda: C64) -> Result<Frame> {
    if lambda == C64::new(0.0, 0.0) {
        return Err(Error::ZeroScalar);
    }
    f.map(|x| x.scale(lambda))
}

/// `count` i.i.d. complex Gaussian vectors in `C^dim`. Spans with probability
/// one when `count ≥ dim`; callers re-check with [`frame_bounds`].
pub fn random_frame(dim: usize, count: usize, seed: u64) -> Result<Frame> {
    random_frame_with(dim, count, &mut seeded_rng(seed))
}

pub fn random_frame_with(dim: usize, count: usize, rng: &mut FrameRng) -> Result<Frame> {
    if dim == 0 || count == 0 {
        return Err(Error::ZeroDimension);
    }
    Frame::new((0..count).map(|_| random_gaussian_vector(dim, rng)).collect())
}

/// A random normalized tight frame of `count` vectors in `C^dim`.
///
/// Draws a `count × dim` Gaussian matrix, orthonormalizes its columns to get
/// `Q` with `QᴴQ = I`, and takes `xₙ = conj(row n of Q)`, so that
/// `Σₙ xₙ·xₙᴴ = QᴴQ = I`.
pub fn random_tight_frame(dim: usize, count: usize, seed: u64) -> Result<Frame> {
    random_tight_frame_with(dim, count, &mut seeded_rng(seed))
}

pub fn random_tight_frame_with(dim: usize, count: usize, rng: &mut FrameRng) -> Result<Frame> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if count < dim {
        return Err(Error::InvalidArgument(format!(
            "a tight frame in dimension {dim} needs at least {dim} vectors, got {count}"
        )));
    }
    let q = orthonormal_columns(&random_gaussian_matrix_with(count, dim, rng))?;
    Frame::new((0..count).map(|n| q.row(n).conj()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn vreal(v: &[f64]) -> CVector {
        CVector::from_real(v).unwrap()
    }

    fn e1_e2_e2() -> Frame {
        Frame::new(vec![vreal(&[1.0, 0.0]), vreal(&[0.0, 1.0]), vreal(&[0.0, 1.0])]).unwrap()
    }

    fn mercedes() -> Frame {
        let h = 3f64.sqrt() / 2.0;
        Frame::new(vec![vreal(&[1.0, 0.0]), vreal(&[-0.5, h]), vreal(&[-0.5, -h])]).unwrap()
    }

    /// Direct sum of rank-one terms, written out entry by entry.
    fn rank_one_sum(f: &Frame) -> Vec<Vec<C64>> {
        let d = f.dim();
        let mut s = vec![vec![c(0.0, 0.0); d]; d];
        for x in f {
            for (i, row) in s.iter_mut().enumerate() {
                for (j, sij) in row.iter_mut().enumerate() {
                    *sij += x[i] * x[j].conj();
                }
            }
        }
        s
    }

    #[test]
    fn frame_operator_examples() {
        let s = frame_operator(&e1_e2_e2()).matrix;
        assert!(s.max_abs_diff(&CMatrix::from_diag(&[1.0, 2.0])).unwrap() < 1e-15);

        let oracle = rank_one_sum(&mercedes());
        for (i, row) in oracle.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let expected = if i == j { 1.5 } else { 0.0 };
                assert!((v - c(expected, 0.0)).norm() < 1e-15);
            }
        }
        let s = frame_operator(&mercedes()).matrix;
        assert!(s.max_abs_diff(&CMatrix::from_diag(&[1.5, 1.5])).unwrap() < 1e-15);

        let onb = Frame::standard_basis(3);
        assert_eq!(frame_operator(&onb).matrix, CMatrix::identity(3));
    }

    #[test]
    fn bounds_examples() {
        let b = frame_bounds(&e1_e2_e2()).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 2.0).abs() < 1e-12);
        assert!(b.is_frame && !b.is_tight && !b.is_normalized_tight);

        let b = frame_bounds(&mercedes()).unwrap();
        assert!((b.lower - 1.5).abs() < 1e-12 && (b.upper - 1.5).abs() < 1e-12);
        assert!(b.is_frame && b.is_tight && !b.is_normalized_tight);

        let b = frame_bounds(&Frame::new(vec![vreal(&[1.0, 0.0])]).unwrap()).unwrap();
        assert_eq!(b.lower, 0.0);
        assert!(!b.is_frame && !b.is_tight);
    }

    #[test]
    fn classify_zero_family() {
        let b = FrameBounds::classify(0.0, 0.0);
        assert!(!b.is_frame);
        let b = FrameBounds::classify(-1e-17, 2.0);
        assert_eq!(b.lower, 0.0);
    }

    #[test]
    fn new_rejects_empty_and_ragged() {
        assert!(matches!(Frame::new(vec![]), Err(Error::EmptyFamily)));
        assert!(matches!(
            Frame::new(vec![vreal(&[1.0]), vreal(&[1.0, 0.0])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn analysis_synthesis_examples() {
        let onb = Frame::standard_basis(2);
        let x = CVector::new(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_eq!(analysis(&onb, &x).unwrap(), x);

        let e1 = CVector::basis(2, 0);
        assert!((frame_energy(&mercedes(), &e1).unwrap() - 1.5).abs() < 1e-15);

        let zero = CVector::zeros(3);
        assert_eq!(synthesis(&mercedes(), &zero).unwrap(), CVector::zeros(2));

        assert!(matches!(
            analysis(&onb, &CVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            synthesis(&onb, &CVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn synthesis_of_analysis_is_frame_operator() {
        let f = random_frame(3, 5, 9).unwrap();
        let x = random_gaussian_vector(3, &mut seeded_rng(10));
        let lhs = synthesis(&f, &analysis(&f, &x).unwrap()).unwrap();
        let rhs = frame_operator(&f).apply(&x).unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-13);
    }

    #[test]
    fn dual_examples() {
        let dual = canonical_dual(&e1_e2_e2()).unwrap();
        let expected = Frame::new(vec![vreal(&[1.0, 0.0]), vreal(&[0.0, 0.5]), vreal(&[0.0, 0.5])])
            .unwrap();
        assert!(dual.max_distance(&expected).unwrap() < 1e-14);

        let m = mercedes();
        let dual = canonical_dual(&m).unwrap();
        let expected = scale_frame(&m, c(2.0 / 3.0, 0.0)).unwrap();
        assert!(dual.max_distance(&expected).unwrap() < 1e-14);

        let err = canonical_dual(&Frame::new(vec![vreal(&[1.0, 0.0])]).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotAFrame { .. }));
    }

    #[test]
    fn reconstruct_examples() {
        let onb = Frame::standard_basis(2);
        let x = CVector::new(vec![c(0.3, -1.0), c(2.0, 0.5)]).unwrap();
        assert!(reconstruct(&onb, &x).unwrap().residual <= 1e-12);

        let x = CVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let dual = canonical_dual(&e1_e2_e2()).unwrap();
        let coeffs = analysis(&dual, &x).unwrap();
        let expected = CVector::new(vec![c(1.0, 0.0), c(0.0, 0.5), c(0.0, 0.5)]).unwrap();
        assert!(coeffs.distance(&expected).unwrap() < 1e-14);
        let r = reconstruct(&e1_e2_e2(), &x).unwrap();
        assert!(r.residual <= 1e-10);
        assert!(r.x_hat.distance(&x).unwrap() <= 1e-10);

        let r = reconstruct(&mercedes(), &CVector::zeros(2)).unwrap();
        assert_eq!(r.x_hat, CVector::zeros(2));
    }

    #[test]
    fn scaling_examples() {
        let onb = Frame::standard_basis(2);
        let lambda = c(0.0, 2.0);
        let lhs = canonical_dual(&scale_frame(&onb, lambda).unwrap()).unwrap();
        let rhs = scale_frame(&onb, c(0.0, 0.5)).unwrap();
        assert!(lhs.max_distance(&rhs).unwrap() < 1e-14);

        let m = mercedes();
        let dual = canonical_dual(&m).unwrap();
        let dual_unit = canonical_dual(&scale_frame(&m, c(1.0, 0.0)).unwrap()).unwrap();
        assert!(dual.max_distance(&dual_unit).unwrap() < 1e-15);

        let b = frame_bounds(&scale_frame(&m, c(3.0, 0.0)).unwrap()).unwrap();
        assert!((b.lower - 13.5).abs() < 1e-11 && (b.upper - 13.5).abs() < 1e-11);

        assert!(matches!(scale_frame(&m, c(0.0, 0.0)), Err(Error::ZeroScalar)));
    }

    #[test]
    fn random_tight_frames_are_normalized() {
        for seed in 0..20 {
            let b = frame_bounds(&random_tight_frame(2, 4, seed).unwrap()).unwrap();
            assert!((b.lower - 1.0).abs() <= 1e-10 && (b.upper - 1.0).abs() <= 1e-10);
            assert!(b.is_normalized_tight);
        }
        let square = random_tight_frame(3, 3, 5).unwrap();
        for (i, a) in square.iter().enumerate() {
            for (j, b) in square.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b).unwrap() - c(expected, 0.0)).norm() < 1e-12);
            }
        }
        assert!(matches!(random_tight_frame(3, 2, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn random_frames_are_almost_always_frames() {
        let hits = (0..200)
            .filter(|&s| frame_bounds(&random_frame(2, 3, s).unwrap()).unwrap().is_frame)
            .count();
        assert!(hits >= 198, "{hits}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn frame_inequality_holds(seed in any::<u64>(), dim in 2usize..=4, extra in 0usize..=2) {
            let mut rng = seeded_rng(seed);
            let f = random_frame_with(dim, dim + extra, &mut rng).unwrap();
            let b = frame_bounds(&f).unwrap();
            for _ in 0..10 {
                let x = random_gaussian_vector(dim, &mut rng);
                let e = frame_energy(&f, &x).unwrap();
                let n2 = x.norm_sqr();
                prop_assert!(b.lower * n2 <= e + 1e-9 * b.upper * n2);
                prop_assert!(e <= b.upper * n2 * (1.0 + 1e-9));
            }
        }

        #[test]
        fn dual_involution_and_bounds(seed in any::<u64>(), dim in 2usize..=4) {
            let f = random_frame(dim, dim + 2, seed).unwrap();
            let b = frame_bounds(&f).unwrap();
            prop_assume!(b.is_frame && b.ratio() < 1e6);
            let dual = canonical_dual(&f).unwrap();
            let db = frame_bounds(&dual).unwrap();
            prop_assert!((db.lower - 1.0 / b.upper).abs() <= 1e-9 * db.lower.max(db.upper));
            prop_assert!((db.upper - 1.0 / b.lower).abs() <= 1e-9 * db.upper);
            let back = canonical_dual(&dual).unwrap();
            let scale = f.iter().map(CVector::norm).fold(0.0, f64::max);
            prop_assert!(back.max_distance(&f).unwrap() <= 1e-9 * scale.max(1.0));
        }
    }
}
