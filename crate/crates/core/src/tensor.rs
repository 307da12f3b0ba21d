//! Frames of `H ⊗ K`.
//!
//! Operator frames are families of [`HSElement`]s sharing one shape. Frame
//! questions about them (bounds, duals) are answered by flattening each
//! element row-major into `C^(dim_h·dim_k)`, which is an isometry for the
//! Hilbert–Schmidt inner product and sends `x ⊗ y` to `kron(x, y)`.
//!
//! Product families are ordered lexicographically, the outer index coming
//! from the first factor.

use crate::error::{Error, Result};
use crate::frames::{canonical_dual, frame_bounds, frame_operator, Frame, FrameBounds};
use crate::hs::{adjoint, apply, hs_inner, simple_tensor, HSElement};
use crate::numeric::{
    kron, random_gaussian_matrix_with, seeded_rng, singular_value_extremes, CMatrix, CVector,
    FrameRng, DEFAULT_SIZE_CAP,
};

/// Smallest singular value must exceed this fraction of the spectral norm
/// for a transform operator to count as invertible.
pub const INVERTIBILITY_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct OperatorFrame {
    dim_h: usize,
    dim_k: usize,
    elements: Vec<HSElement>,
    index_labels: Option<Vec<(usize, usize)>>,
}

impl OperatorFrame {
    pub fn new(elements: Vec<HSElement>) -> Result<Self> {
        let (dim_h, dim_k) = elements.first().ok_or(Error::EmptyFamily)?.shape();
        if let Some(bad) = elements.iter().find(|t| t.shape() != (dim_h, dim_k)) {
            return Err(Error::ShapeMismatch {
                context: "operator frame elements",
                left: (dim_h, dim_k),
                right: bad.shape(),
            });
        }
        Ok(Self {
            dim_h,
            dim_k,
            elements,
            index_labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<(usize, usize)>) -> Result<Self> {
        if labels.len() != self.elements.len() {
            return Err(Error::DimensionMismatch {
                context: "operator frame labels",
                expected: self.elements.len(),
                found: labels.len(),
            });
        }
        self.index_labels = Some(labels);
        Ok(self)
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[HSElement] {
        &self.elements
    }

    pub fn index_labels(&self) -> Option<&[(usize, usize)]> {
        self.index_labels.as_deref()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HSElement> {
        self.elements.iter()
    }

    pub fn flatten(&self) -> FlattenedView {
        FlattenedView {
            frame: Frame::new(self.elements.iter().map(HSElement::flatten).collect())
                .expect("operator frames are nonempty with uniform shape"),
        }
    }

    /// Largest entrywise deviation between corresponding elements.
    pub fn max_abs_diff(&self, other: &OperatorFrame) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                context: "operator frame comparison",
                expected: self.len(),
                found: other.len(),
            });
        }
        self.elements
            .iter()
            .zip(&other.elements)
            .try_fold(0.0f64, |acc, (a, b)| {
                Ok(acc.max(a.matrix().max_abs_diff(b.matrix())?))
            })
    }
}

impl std::fmt::Debug for OperatorFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OperatorFrame")
            .field("dim_h", &self.dim_h)
            .field("dim_k", &self.dim_k)
            .field("elements", &self.elements)
            .field("index_labels", &self.index_labels)
            .finish()
    }
}

impl<'a> IntoIterator for &'a OperatorFrame {
    type Item = &'a HSElement;
    type IntoIter = std::slice::Iter<'a, HSElement>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// An operator frame seen as a frame of `C^(dim_h·dim_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlattenedView {
    pub frame: Frame,
}

impl FlattenedView {
    pub fn unflatten(&self, dim_h: usize, dim_k: usize) -> Result<OperatorFrame> {
        OperatorFrame::new(
            self.frame
                .iter()
                .map(|v| HSElement::unflatten(v, dim_h, dim_k))
                .collect::<Result<_>>()?,
        )
    }
}

/// `count` i.i.d. complex Gaussian `dim_h × dim_k` elements.
pub fn random_operator_frame(
    dim_h: usize,
    dim_k: usize,
    count: usize,
    rng: &mut FrameRng,
) -> Result<OperatorFrame> {
    if dim_h == 0 || dim_k == 0 || count == 0 {
        return Err(Error::ZeroDimension);
    }
    OperatorFrame::new(
        (0..count)
            .map(|_| HSElement::new(random_gaussian_matrix_with(dim_h, dim_k, rng)))
            .collect(),
    )
}

pub fn random_operator_frame_seeded(
    dim_h: usize,
    dim_k: usize,
    count: usize,
    seed: u64,
) -> Result<OperatorFrame> {
    random_operator_frame(dim_h, dim_k, count, &mut seeded_rng(seed))
}

fn kron_vectors(x: &CVector, y: &CVector) -> CVector {
    let data = x
        .iter()
        .flat_map(|a| y.iter().map(move |b| a * b))
        .collect();
    CVector::new(data).expect("product of finite nonempty vectors")
}

fn tensor_pair(f1: &Frame, f2: &Frame, cap: usize) -> Result<Frame> {
    let entries = f1
        .len()
        .checked_mul(f2.len())
        .and_then(|n| n.checked_mul(f1.dim()))
        .and_then(|n| n.checked_mul(f2.dim()));
    match entries {
        Some(e) if e <= cap => {}
        _ => {
            return Err(Error::SizeCap {
                entries: entries.unwrap_or(usize::MAX),
                cap,
            })
        }
    }
    let mut vectors = Vec::with_capacity(f1.len() * f2.len());
    for x in f1 {
        for y in f2 {
            vectors.push(kron_vectors(x, y));
        }
    }
    Frame::new(vectors)
}

/// Flattened tensor frame `{kron(y₁, …, yₙ)}` over the full index product,
/// lexicographic in `(i₁, …, iₙ)`, with the default size cap.
pub fn tensor_frame(factors: &[&Frame]) -> Result<Frame> {
    tensor_frame_capped(factors, DEFAULT_SIZE_CAP)
}

/// As [`tensor_frame`], refusing results with more than `cap` scalar entries.
pub fn tensor_frame_capped(factors: &[&Frame], cap: usize) -> Result<Frame> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyFamily)?;
    rest.iter()
        .try_fold((*first).clone(), |acc, f| tensor_pair(&acc, f, cap))
}

/// `{xₙ ⊗ yₘ}` as Hilbert–Schmidt elements, labelled `(n, m)`.
pub fn tensor_operator_frame(f1: &Frame, f2: &Frame) -> Result<OperatorFrame> {
    let entries = f1.len() * f2.len() * f1.dim() * f2.dim();
    if entries > DEFAULT_SIZE_CAP {
        return Err(Error::SizeCap {
            entries,
            cap: DEFAULT_SIZE_CAP,
        });
    }
    let mut elements = Vec::with_capacity(f1.len() * f2.len());
    let mut labels = Vec::with_capacity(f1.len() * f2.len());
    for (n, x) in f1.iter().enumerate() {
        for (m, y) in f2.iter().enumerate() {
            elements.push(simple_tensor(x, y));
            labels.push((n, m));
        }
    }
    OperatorFrame::new(elements)?.with_labels(labels)
}

/// Matrix units `eᵢ ⊗ uⱼ`, an orthonormal basis of `C^dim_h ⊗ C^dim_k`.
pub fn matrix_units(dim_h: usize, dim_k: usize) -> OperatorFrame {
    tensor_operator_frame(&Frame::standard_basis(dim_h), &Frame::standard_basis(dim_k))
        .expect("matrix units fit the size cap for reasonable dimensions")
}

pub fn op_frame_bounds(of: &OperatorFrame) -> Result<FrameBounds> {
    frame_bounds(&of.flatten().frame)
}

/// `{Tₙ y₀}`, a family in `H`.
pub fn slice_left(of: &OperatorFrame, y0: &CVector) -> Result<Frame> {
    Frame::new(of.iter().map(|t| apply(t, y0)).collect::<Result<_>>()?)
}

/// `{Tₙ* x₀}`, a family in `K`.
pub fn slice_right(of: &OperatorFrame, x0: &CVector) -> Result<Frame> {
    if x0.dim() != of.dim_h() {
        return Err(Error::DimensionMismatch {
            context: "slice_right",
            expected: of.dim_h(),
            found: x0.dim(),
        });
    }
    Frame::new(of.iter().map(|t| apply(&adjoint(t), x0)).collect::<Result<_>>()?)
}

/// `{Tₙ ∘ (y₀ ⊗ x₀) ∘ Tₘ}` over all pairs `(n, m)`, built as
/// `Tₙ y₀ ⊗ Tₘ* x₀`.
pub fn sandwich_frame(of: &OperatorFrame, y0: &CVector, x0: &CVector) -> Result<OperatorFrame> {
    let left = slice_left(of, y0)?;
    let right = slice_right(of, x0)?;
    let mut elements = Vec::with_capacity(of.len() * of.len());
    let mut labels = Vec::with_capacity(of.len() * of.len());
    for (n, a) in left.iter().enumerate() {
        for (m, b) in right.iter().enumerate() {
            elements.push(simple_tensor(a, b));
            labels.push((n, m));
        }
    }
    OperatorFrame::new(elements)?.with_labels(labels)
}

fn check_invertible(op: &CMatrix, dim: usize, context: &'static str) -> Result<()> {
    if !op.is_square() {
        return Err(Error::NotSquare {
            rows: op.rows(),
            cols: op.cols(),
        });
    }
    if op.rows() != dim {
        return Err(Error::DimensionMismatch {
            context,
            expected: dim,
            found: op.rows(),
        });
    }
    let (sigma_min, sigma_max) = singular_value_extremes(op);
    if !(sigma_min > INVERTIBILITY_TOL * sigma_max) {
        return Err(Error::NotInvertible { sigma_min });
    }
    Ok(())
}

/// `{Q ∘ Tₙ ∘ R}` with either side optional.
///
/// Left composition with a linear `Q` gives the matrix `q·mₙ`. Right
/// composition goes through the antilinear `Tₙ`:
/// `Tₙ(R y) = mₙ·conj(r·y) = (mₙ·conj(r))·conj(y)`, so the matrix is `mₙ·conj(r)`.
pub fn transform(
    of: &OperatorFrame,
    q: Option<&CMatrix>,
    r: Option<&CMatrix>,
) -> Result<OperatorFrame> {
    if let Some(q) = q {
        check_invertible(q, of.dim_h(), "left transform")?;
    }
    let r_conj = match r {
        Some(r) => {
            check_invertible(r, of.dim_k(), "right transform")?;
            Some(r.conj())
        }
        None => None,
    };
    let elements = of
        .iter()
        .map(|t| {
            let mut m = t.matrix().clone();
            if let Some(q) = q {
                m = q.matmul(&m)?;
            }
            if let Some(rc) = &r_conj {
                m = m.matmul(rc)?;
            }
            Ok(HSElement::new(m))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = OperatorFrame::new(elements)?;
    match of.index_labels() {
        Some(labels) => out.with_labels(labels.to_vec()),
        None => Ok(out),
    }
}

/// Admissible bounds for `{Q Tₙ R}` given bounds `(A, B)` of `{Tₙ}`:
/// `[A·‖Q⁻¹‖⁻²·‖R⁻¹‖⁻², B·‖Q‖²·‖R‖²]`.
pub fn transform_envelope(bounds: &FrameBounds, q: Option<&CMatrix>, r: Option<&CMatrix>) -> (f64, f64) {
    let (mut lo, mut hi) = (bounds.lower, bounds.upper);
    for op in [q, r].into_iter().flatten() {
        let (smin, smax) = singular_value_extremes(op);
        lo *= smin * smin;
        hi *= smax * smax;
    }
    (lo, hi)
}

/// `{Tₙ*}`, a family in `K ⊗ H`.
pub fn adjoint_frame(of: &OperatorFrame) -> OperatorFrame {
    OperatorFrame {
        dim_h: of.dim_k,
        dim_k: of.dim_h,
        elements: of.elements.iter().map(adjoint).collect(),
        index_labels: of.index_labels.clone(),
    }
}

/// `S(T) = Σₙ ⟨T, Tₙ⟩·Tₙ`, summed in element order.
pub fn op_frame_operator_apply(of: &OperatorFrame, t: &HSElement) -> Result<HSElement> {
    let mut acc = HSElement::zero(of.dim_h(), of.dim_k());
    for tn in of {
        let coeff = hs_inner(t, tn)?;
        acc = acc.add(&tn.scale(coeff))?;
    }
    Ok(acc)
}

fn check_product_shape(f1: &Frame, f2: &Frame, t: &HSElement) -> Result<()> {
    if t.shape() != (f1.dim(), f2.dim()) {
        return Err(Error::ShapeMismatch {
            context: "factored frame operator",
            left: (f1.dim(), f2.dim()),
            right: t.shape(),
        });
    }
    Ok(())
}

/// Frame operator of `{xₙ ⊗ yₘ}` in factored form: `T ↦ S₁·m·S₂ᵀ`.
pub fn factored_frame_operator(f1: &Frame, f2: &Frame, t: &HSElement) -> Result<HSElement> {
    check_product_shape(f1, f2, t)?;
    let s1 = frame_operator(f1).matrix;
    let s2 = frame_operator(f2).matrix;
    Ok(HSElement::new(s1.matmul(t.matrix())?.matmul(&s2.transpose())?))
}

/// Frame operator of `{xₙ ⊗ yₘ}` as `kron(S₁, S₂)` acting on the flattened element.
pub fn kron_frame_operator_apply(f1: &Frame, f2: &Frame, t: &HSElement) -> Result<HSElement> {
    check_product_shape(f1, f2, t)?;
    let s = kron(&frame_operator(f1).matrix, &frame_operator(f2).matrix)?;
    HSElement::unflatten(&s.mul_vec(&t.flatten())?, t.dim_h(), t.dim_k())
}

/// Canonical dual `{S⁻¹Tₙ}` computed on the flattened frame.
pub fn op_canonical_dual(of: &OperatorFrame) -> Result<OperatorFrame> {
    let dual = FlattenedView {
        frame: canonical_dual(&of.flatten().frame)?,
    }
    .unflatten(of.dim_h(), of.dim_k())?;
    match of.index_labels() {
        Some(labels) => dual.with_labels(labels.to_vec()),
        None => Ok(dual),
    }
}

/// `Σₙ Σₘ |⟨T, xₙ ⊗ yₘ⟩|²`, evaluated as `Σ |⟨T yₘ, xₙ⟩|²`.
pub fn product_energy(f1: &Frame, f2: &Frame, t: &HSElement) -> Result<f64> {
    let mut acc = 0.0;
    for y in f2 {
        let ty = apply(t, y)?;
        for x in f1 {
            acc += ty.inner(x)?.norm_sqr();
        }
    }
    Ok(acc)
}
