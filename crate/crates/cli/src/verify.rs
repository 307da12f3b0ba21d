//! The verification suite: every structural identity of the library, checked
//! numerically on seeded random instances and on user-supplied frames.
//!
//! Each check produces one record per instance with a nonnegative residual
//! and a fixed tolerance; a record passes iff `residual ≤ tolerance`.
//! Records are sorted by check name, then instance index, so a fixed seed
//! always produces byte-identical reports.

use std::fmt::Write as _;

use frametensor::frames::{
    analysis, canonical_dual, frame_bounds, frame_energy, random_frame_with, random_tight_frame_with,
    reconstruct_with_dual, scale_frame, synthesis, FrameBounds,
};
use frametensor::hs::{
    adjoint, apply, column_energy, expand_basis, expand_tight, hs_inner, hs_norm, row_energy,
    simple_tensor, tight_energy, tight_inner, HSElement,
};
use frametensor::numeric::{
    hermitian_eig, hpd_inverse, hpd_solve, kron, operator_norm_2, orthonormal_columns,
    random_gaussian_matrix_with, random_gaussian_vector, seeded_rng, singular_value_extremes, CMatrix,
    CVector, FrameRng,
};
use frametensor::tensor::{
    adjoint_frame, factored_frame_operator, kron_frame_operator_apply, op_canonical_dual,
    op_frame_bounds, op_frame_operator_apply, random_operator_frame, sandwich_frame, slice_left,
    slice_right, tensor_frame, tensor_operator_frame, transform, transform_envelope,
};
use frametensor::{Error, Frame, OperatorFrame, Result, C64};
use rand::Rng;
use serde::Serialize;

/// Frames with `upper/lower` above this are redrawn before checks that
/// depend on inverting the frame operator.
const MAX_RATIO: f64 = 1e4;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckRecord {
    pub check: String,
    pub instance: usize,
    pub description: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub records: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
}

impl VerifyReport {
    /// Sort into canonical order and count.
    pub fn from_records(seed: u64, trials: usize, mut records: Vec<CheckRecord>) -> Self {
        records.sort_by(|a, b| a.check.cmp(&b.check).then(a.instance.cmp(&b.instance)));
        let passed = records.iter().filter(|r| r.pass).count();
        VerifyReport {
            seed,
            trials,
            failed: records.len() - passed,
            passed,
            records,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per check with the worst residual, then every failing record.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{:<40} {:>9} {:>12} {:>10}  status",
            "check", "instances", "max resid", "tolerance"
        )
        .unwrap();
        let mut i = 0;
        while i < self.records.len() {
            let name = &self.records[i].check;
            let group: Vec<&CheckRecord> = self.records[i..]
                .iter()
                .take_while(|r| &r.check == name)
                .collect();
            let worst = group.iter().map(|r| r.residual).fold(0.0, |a: f64, b| {
                if b.is_nan() { f64::NAN } else { a.max(b) }
            });
            let failures = group.iter().filter(|r| !r.pass).count();
            writeln!(
                out,
                "{:<40} {:>9} {:>12.3e} {:>10.1e}  {}",
                name,
                group.len(),
                worst,
                group[0].tolerance,
                if failures == 0 { "pass".to_string() } else { format!("FAIL ({failures})") }
            )
            .unwrap();
            i += group.len();
        }
        let failing: Vec<&CheckRecord> = self.records.iter().filter(|r| !r.pass).collect();
        if !failing.is_empty() {
            writeln!(out, "\nfailures:").unwrap();
            for r in failing {
                writeln!(
                    out,
                    "  {} #{} ({}): residual {:.3e} > {:.1e}",
                    r.check, r.instance, r.description, r.residual, r.tolerance
                )
                .unwrap();
            }
        }
        writeln!(out, "\n{} passed, {} failed", self.passed, self.failed).unwrap();
        out
    }
}

/// A user-supplied instance.
#[derive(Debug, Clone)]
pub enum UserInstance {
    Frame { label: String, frame: Frame },
    OperatorFrame { label: String, frame: OperatorFrame },
}

struct Measured {
    residual: f64,
    description: String,
}

impl Measured {
    fn new(residual: f64, description: impl Into<String>) -> Self {
        Self {
            residual,
            description: description.into(),
        }
    }
}

type RandomCheck = fn(&mut FrameRng) -> Result<Measured>;
type FrameCheck = fn(&Frame, &mut FrameRng) -> Result<Measured>;
type OperatorCheck = fn(&OperatorFrame, &mut FrameRng) -> Result<Measured>;

struct Check {
    name: &'static str,
    tolerance: f64,
    random: RandomCheck,
    on_frame: Option<FrameCheck>,
    on_operator_frame: Option<OperatorCheck>,
}

fn stream_id(name: &str) -> u64 {
    // FNV-1a, stable across platforms and releases.
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn check_rng(seed: u64, name: &str) -> FrameRng {
    let mut rng = seeded_rng(seed);
    rng.set_stream(stream_id(name));
    rng
}

fn record(check: &Check, instance: usize, outcome: Result<Measured>) -> CheckRecord {
    let (residual, description) = match outcome {
        Ok(m) => (m.residual, m.description),
        Err(e) => (f64::INFINITY, format!("error: {e}")),
    };
    CheckRecord {
        check: check.name.to_string(),
        instance,
        description,
        residual,
        tolerance: check.tolerance,
        pass: residual <= check.tolerance,
    }
}

/// Run the whole suite.
pub fn run(seed: u64, trials: usize, user: &[UserInstance]) -> VerifyReport {
    let mut records = Vec::new();
    for check in checks() {
        let mut rng = check_rng(seed, check.name);
        for trial in 0..trials {
            records.push(record(&check, trial, (check.random)(&mut rng)));
        }
        for (k, inst) in user.iter().enumerate() {
            let outcome = match inst {
                UserInstance::Frame { label, frame } => check.on_frame.map(|f| {
                    f(frame, &mut rng).map(|m| Measured::new(m.residual, format!("{label}: {}", m.description)))
                }),
                UserInstance::OperatorFrame { label, frame } => check.on_operator_frame.map(|f| {
                    f(frame, &mut rng).map(|m| Measured::new(m.residual, format!("{label}: {}", m.description)))
                }),
            };
            if let Some(outcome) = outcome {
                records.push(record(&check, trials + k, outcome));
            }
        }
    }
    VerifyReport::from_records(seed, trials, records)
}

/// Names of all checks, sorted.
pub fn check_names() -> Vec<&'static str> {
    let mut names: Vec<_> = checks().iter().map(|c| c.name).collect();
    names.sort();
    names
}

fn checks() -> Vec<Check> {
    vec![
        // numeric core
        Check { name: "numeric.eigen_reconstruction", tolerance: 1e-10, random: eigen_reconstruction, on_frame: None, on_operator_frame: None },
        Check { name: "numeric.kron_spectrum", tolerance: 1e-9, random: kron_spectrum, on_frame: None, on_operator_frame: None },
        Check { name: "numeric.hpd_solve_round_trip", tolerance: 1e-10, random: hpd_round_trip, on_frame: None, on_operator_frame: None },
        Check { name: "numeric.kron_operator_norm", tolerance: 1e-9, random: kron_operator_norm, on_frame: None, on_operator_frame: None },
        // single-space frames
        Check { name: "frames.frame_inequality", tolerance: 1e-9, random: |rng| frame_inequality(&random_frame(rng)?, rng), on_frame: Some(frame_inequality), on_operator_frame: None },
        Check { name: "frames.normalized_tight_reconstruction", tolerance: 1e-10, random: normalized_tight_reconstruction, on_frame: None, on_operator_frame: None },
        Check { name: "frames.dual_bounds", tolerance: 1e-9, random: |rng| dual_bounds(&random_frame(rng)?, rng), on_frame: Some(dual_bounds), on_operator_frame: None },
        Check { name: "frames.dual_energy_identity", tolerance: 1e-9, random: |rng| dual_energy(&random_frame(rng)?, rng), on_frame: Some(dual_energy), on_operator_frame: None },
        Check { name: "frames.dual_involution", tolerance: 1e-9, random: |rng| dual_involution(&random_frame(rng)?, rng), on_frame: Some(dual_involution), on_operator_frame: None },
        Check { name: "frames.dual_reconstruction", tolerance: 1e-9, random: |rng| dual_reconstruction(&random_frame(rng)?, rng), on_frame: Some(dual_reconstruction), on_operator_frame: None },
        Check { name: "frames.dual_scaling", tolerance: 1e-10, random: |rng| dual_scaling(&random_frame(rng)?, rng), on_frame: Some(dual_scaling), on_operator_frame: None },
        // Hilbert–Schmidt space
        Check { name: "hs.adjoint_identity", tolerance: 1e-12, random: adjoint_identity, on_frame: None, on_operator_frame: None },
        Check { name: "hs.parseval_independence", tolerance: 1e-12, random: parseval_independence, on_frame: None, on_operator_frame: None },
        Check { name: "hs.simple_tensor_norm", tolerance: 1e-12, random: simple_tensor_norm, on_frame: None, on_operator_frame: None },
        Check { name: "hs.simple_tensor_inner", tolerance: 1e-12, random: simple_tensor_inner, on_frame: None, on_operator_frame: None },
        Check { name: "hs.basis_expansion", tolerance: 1e-12, random: basis_expansion, on_frame: None, on_operator_frame: None },
        Check { name: "hs.tight_expansion", tolerance: 1e-10, random: tight_expansion, on_frame: None, on_operator_frame: None },
        Check { name: "hs.tight_inner_product", tolerance: 1e-10, random: tight_inner_product, on_frame: None, on_operator_frame: None },
        Check { name: "hs.tight_energy_invariance", tolerance: 1e-10, random: tight_energy_invariance, on_frame: None, on_operator_frame: None },
        // frames of the tensor product
        Check { name: "tensor.product_bounds_2", tolerance: 1e-9, random: product_bounds_2, on_frame: Some(product_bounds_self), on_operator_frame: None },
        Check { name: "tensor.product_bounds_3", tolerance: 1e-9, random: product_bounds_3, on_frame: None, on_operator_frame: None },
        Check { name: "tensor.normalized_tight_closure", tolerance: 1e-10, random: normalized_tight_closure, on_frame: None, on_operator_frame: None },
        Check { name: "tensor.product_estimate_inner", tolerance: 1e-9, random: product_estimate_inner, on_frame: None, on_operator_frame: None },
        Check { name: "tensor.product_estimate_outer", tolerance: 1e-9, random: product_estimate_outer, on_frame: None, on_operator_frame: None },
        Check { name: "tensor.slice_left_containment", tolerance: 1e-9, random: |rng| slice_left_containment(&random_operator(rng)?, rng), on_frame: None, on_operator_frame: Some(slice_left_containment) },
        Check { name: "tensor.slice_right_containment", tolerance: 1e-9, random: |rng| slice_right_containment(&random_operator(rng)?, rng), on_frame: None, on_operator_frame: Some(slice_right_containment) },
        Check { name: "tensor.tight_slice_constant", tolerance: 1e-9, random: tight_slice_constant, on_frame: None, on_operator_frame: None },
        Check { name: "tensor.sandwich_is_frame", tolerance: 0.0, random: |rng| sandwich_is_frame(&random_operator(rng)?, rng), on_frame: None, on_operator_frame: Some(sandwich_is_frame) },
        Check { name: "tensor.sandwich_composition", tolerance: 1e-12, random: |rng| sandwich_composition(&random_operator(rng)?, rng), on_frame: None, on_operator_frame: Some(sandwich_composition) },
        Check { name: "tensor.transform_envelope", tolerance: 1e-9, random: |rng| transform_containment(&random_operator(rng)?, rng), on_frame: None, on_operator_frame: Some(transform_containment) },
        Check { name: "tensor.unitary_transform_invariance", tolerance: 1e-9, random: |rng| unitary_invariance(&random_operator(rng)?, rng), on_frame: None, on_operator_frame: Some(unitary_invariance) },
        Check { name: "tensor.adjoint_frame_bounds", tolerance: 1e-10, random: |rng| adjoint_frame_bounds(&random_operator(rng)?, rng), on_frame: None, on_operator_frame: Some(adjoint_frame_bounds) },
        Check { name: "tensor.adjoint_frame_involution", tolerance: 0.0, random: |rng| adjoint_involution(&random_operator(rng)?, rng), on_frame: None, on_operator_frame: Some(adjoint_involution) },
        Check { name: "tensor.frame_operator_factorization", tolerance: 1e-10, random: frame_operator_factorization, on_frame: None, on_operator_frame: None },
        Check { name: "tensor.tensor_dual_factorization", tolerance: 1e-9, random: tensor_dual_factorization, on_frame: None, on_operator_frame: None },
        Check { name: "tensor.adjoint_dual_commutation", tolerance: 1e-9, random: |rng| adjoint_dual_commutation(&random_operator(rng)?, rng), on_frame: None, on_operator_frame: Some(adjoint_dual_commutation) },
    ]
}

// ---------------------------------------------------------------------------
// instance generators

fn well_conditioned(mut draw: impl FnMut() -> Result<Frame>) -> Result<Frame> {
    for _ in 0..100 {
        let f = draw()?;
        let b = frame_bounds(&f)?;
        if b.is_frame && b.ratio() <= MAX_RATIO {
            return Ok(f);
        }
    }
    Err(Error::InvalidArgument("no well-conditioned frame in 100 draws".into()))
}

/// Dimension 2–4, between `dim` and 6 vectors.
fn random_frame(rng: &mut FrameRng) -> Result<Frame> {
    let dim = rng.random_range(2..=4);
    let count = rng.random_range(dim..=6);
    well_conditioned(|| random_frame_with(dim, count, rng))
}

fn random_small_frame(dim: usize, rng: &mut FrameRng) -> Result<Frame> {
    let count = rng.random_range(dim..=dim + 2);
    well_conditioned(|| random_frame_with(dim, count, rng))
}

fn random_tight(dim: usize, rng: &mut FrameRng) -> Result<Frame> {
    let count = rng.random_range(dim..=dim + 2);
    random_tight_frame_with(dim, count, rng)
}

/// Operator frame of shape 2×2, 2×3 or 3×2 with between `dim_h·dim_k` and
/// `max(6, dim_h·dim_k)` elements.
fn random_operator(rng: &mut FrameRng) -> Result<OperatorFrame> {
    let (dh, dk) = [(2, 2), (2, 3), (3, 2)][rng.random_range(0..3)];
    let count = rng.random_range(dh * dk..=(dh * dk).max(6));
    for _ in 0..100 {
        let of = random_operator_frame(dh, dk, count, rng)?;
        let b = op_frame_bounds(&of)?;
        if b.is_frame && b.ratio() <= MAX_RATIO {
            return Ok(of);
        }
    }
    Err(Error::InvalidArgument("no well-conditioned operator frame in 100 draws".into()))
}

fn random_unit_vector(dim: usize, rng: &mut FrameRng) -> CVector {
    let v = random_gaussian_vector(dim, rng);
    v.scale(C64::new(1.0 / v.norm(), 0.0))
}

fn random_hpd(n: usize, rng: &mut FrameRng) -> Result<CMatrix> {
    let g = random_gaussian_matrix_with(n, n, rng);
    g.conj_transpose().matmul(&g)?.add(&CMatrix::identity(n).scale(C64::new(0.1, 0.0)))
}

fn random_invertible(n: usize, rng: &mut FrameRng) -> Result<CMatrix> {
    for _ in 0..100 {
        let q = random_gaussian_matrix_with(n, n, rng);
        let (smin, smax) = singular_value_extremes(&q);
        if smin > 1e-3 * smax {
            return Ok(q);
        }
    }
    Err(Error::InvalidArgument("no well-conditioned operator in 100 draws".into()))
}

fn random_unitary(n: usize, rng: &mut FrameRng) -> Result<CMatrix> {
    orthonormal_columns(&random_gaussian_matrix_with(n, n, rng))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn bounds_mismatch(got: &FrameBounds, lower: f64, upper: f64) -> f64 {
    rel(got.lower, lower).max(rel(got.upper, upper))
}

/// Relative violation of `lo ≤ [got.lower, got.upper] ≤ hi`.
fn containment(got: &FrameBounds, lo: f64, hi: f64) -> f64 {
    let under = (lo - got.lower).max(0.0);
    let over = (got.upper - hi).max(0.0);
    under.max(over) / hi.max(1e-300)
}

fn op_max_rel_diff(a: &OperatorFrame, b: &OperatorFrame) -> Result<f64> {
    let scale = a.iter().map(hs_norm).fold(0.0, f64::max).max(1e-300);
    Ok(a.max_abs_diff(b)? / scale)
}

// ---------------------------------------------------------------------------
// numeric core

fn eigen_reconstruction(rng: &mut FrameRng) -> Result<Measured> {
    let n = rng.random_range(1..=8);
    let g = random_gaussian_matrix_with(n, n, rng);
    let a = g.add(&g.conj_transpose())?;
    let eig = hermitian_eig(&a)?;
    let resid = eig.reconstruct().sub(&a)?.frobenius_norm() / a.frobenius_norm();
    Ok(Measured::new(resid, format!("hermitian {n}x{n}")))
}

fn kron_spectrum(rng: &mut FrameRng) -> Result<Measured> {
    let (n, m) = (rng.random_range(1..=3), rng.random_range(1..=3));
    let a = random_hpd(n, rng)?;
    let b = random_hpd(m, rng)?;
    let ea = hermitian_eig(&a)?.eigenvalues;
    let eb = hermitian_eig(&b)?.eigenvalues;
    let mut products: Vec<f64> = ea.iter().flat_map(|x| eb.iter().map(move |y| x * y)).collect();
    products.sort_by(f64::total_cmp);
    let ek = hermitian_eig(&kron(&a, &b)?)?.eigenvalues;
    let resid = ek.iter().zip(&products).map(|(g, w)| rel(*g, *w)).fold(0.0, f64::max);
    Ok(Measured::new(resid, format!("hpd {n}x{n} (x) {m}x{m}")))
}

fn hpd_round_trip(rng: &mut FrameRng) -> Result<Measured> {
    let n = rng.random_range(1..=6);
    let a = random_hpd(n, rng)?;
    let b = random_gaussian_matrix_with(n, 2, rng);
    let x = hpd_solve(&a, &b)?;
    let resid = a.matmul(&x)?.sub(&b)?.frobenius_norm() / (a.frobenius_norm() * b.frobenius_norm());
    Ok(Measured::new(resid, format!("hpd {n}x{n}")))
}

fn kron_operator_norm(rng: &mut FrameRng) -> Result<Measured> {
    let (n, m) = (rng.random_range(1..=3), rng.random_range(1..=3));
    let a = random_gaussian_matrix_with(n, m, rng);
    let b = random_gaussian_matrix_with(m, n, rng);
    let expected = operator_norm_2(&a) * operator_norm_2(&b);
    Ok(Measured::new(
        rel(operator_norm_2(&kron(&a, &b)?), expected),
        format!("{n}x{m} (x) {m}x{n}"),
    ))
}

// ---------------------------------------------------------------------------
// single-space frames

fn describe(f: &Frame) -> String {
    format!("{} vectors in C^{}", f.len(), f.dim())
}

fn frame_inequality(f: &Frame, rng: &mut FrameRng) -> Result<Measured> {
    let b = frame_bounds(f)?;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x = random_gaussian_vector(f.dim(), rng);
        let e = frame_energy(f, &x)?;
        let n2 = x.norm_sqr();
        let violation = (b.lower * n2 - e).max(e - b.upper * n2).max(0.0);
        worst = worst.max(violation / (b.upper * n2).max(1e-300));
    }
    Ok(Measured::new(worst, describe(f)))
}

fn normalized_tight_reconstruction(rng: &mut FrameRng) -> Result<Measured> {
    let dim = rng.random_range(2..=4);
    let f = random_tight(dim, rng)?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let x = random_gaussian_vector(dim, rng);
        let back = synthesis(&f, &analysis(&f, &x)?)?;
        worst = worst.max(back.distance(&x)? / x.norm());
    }
    Ok(Measured::new(worst, describe(&f)))
}

fn dual_bounds(f: &Frame, _rng: &mut FrameRng) -> Result<Measured> {
    let b = frame_bounds(f)?;
    let db = frame_bounds(&canonical_dual(f)?)?;
    Ok(Measured::new(bounds_mismatch(&db, 1.0 / b.upper, 1.0 / b.lower), describe(f)))
}

fn dual_energy(f: &Frame, rng: &mut FrameRng) -> Result<Measured> {
    let s_inv = hpd_inverse(&frametensor::frames::frame_operator(f).matrix)?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let x = random_gaussian_vector(f.dim(), rng);
        let sx = s_inv.mul_vec(&x)?;
        let lhs = x.inner(&sx)?;
        let rhs = frame_energy(f, &sx)?;
        worst = worst.max((lhs - C64::new(rhs, 0.0)).norm() / rhs.max(1e-300));
    }
    Ok(Measured::new(worst, describe(f)))
}

fn dual_involution(f: &Frame, _rng: &mut FrameRng) -> Result<Measured> {
    let back = canonical_dual(&canonical_dual(f)?)?;
    let scale = f.iter().map(CVector::norm).fold(0.0, f64::max).max(1e-300);
    Ok(Measured::new(back.max_distance(f)? / scale, describe(f)))
}

fn dual_reconstruction(f: &Frame, rng: &mut FrameRng) -> Result<Measured> {
    let dual = canonical_dual(f)?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let x = random_gaussian_vector(f.dim(), rng);
        worst = worst.max(reconstruct_with_dual(f, &dual, &x)?.residual);
    }
    Ok(Measured::new(worst, describe(f)))
}

fn dual_scaling(f: &Frame, _rng: &mut FrameRng) -> Result<Measured> {
    let dual = canonical_dual(f)?;
    let scale = dual.iter().map(CVector::norm).fold(0.0, f64::max).max(1e-300);
    let mut worst = 0.0f64;
    for lambda in [C64::new(2.0, 0.0), C64::new(0.0, 2.0), C64::new(-1.0, 1.0)] {
        let lhs = canonical_dual(&scale_frame(f, lambda)?)?;
        let rhs = scale_frame(&dual, C64::new(1.0, 0.0) / lambda.conj())?;
        worst = worst.max(lhs.max_distance(&rhs)? * lambda.norm() / scale);
    }
    Ok(Measured::new(worst, describe(f)))
}

// ---------------------------------------------------------------------------
// Hilbert–Schmidt space

fn random_shape(rng: &mut FrameRng) -> (usize, usize) {
    (rng.random_range(1..=4), rng.random_range(1..=4))
}

fn random_element(dh: usize, dk: usize, rng: &mut FrameRng) -> HSElement {
    HSElement::new(random_gaussian_matrix_with(dh, dk, rng))
}

fn adjoint_identity(rng: &mut FrameRng) -> Result<Measured> {
    let (dh, dk) = random_shape(rng);
    let t = random_element(dh, dk, rng);
    let ta = adjoint(&t);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let x = random_unit_vector(dh, rng);
        let y = random_unit_vector(dk, rng);
        let lhs = apply(&ta, &x)?.inner(&y)?;
        let rhs = apply(&t, &y)?.inner(&x)?;
        worst = worst.max((lhs - rhs).norm() / (1.0 + hs_norm(&t)));
    }
    Ok(Measured::new(worst, format!("{dh}x{dk}")))
}

fn parseval_independence(rng: &mut FrameRng) -> Result<Measured> {
    let (dh, dk) = random_shape(rng);
    let t = random_element(dh, dk, rng);
    let (a, b) = (column_energy(&t), row_energy(&t));
    Ok(Measured::new((a - b).abs() / a.max(1.0), format!("{dh}x{dk}")))
}

fn simple_tensor_norm(rng: &mut FrameRng) -> Result<Measured> {
    let (dh, dk) = random_shape(rng);
    let x = random_gaussian_vector(dh, rng);
    let y = random_gaussian_vector(dk, rng);
    let expected = x.norm() * y.norm();
    Ok(Measured::new(
        (hs_norm(&simple_tensor(&x, &y)) - expected).abs() / expected.max(1.0),
        format!("C^{dh} (x) C^{dk}"),
    ))
}

fn simple_tensor_inner(rng: &mut FrameRng) -> Result<Measured> {
    let (dh, dk) = random_shape(rng);
    let x = random_gaussian_vector(dh, rng);
    let xp = random_gaussian_vector(dh, rng);
    let y = random_gaussian_vector(dk, rng);
    let yp = random_gaussian_vector(dk, rng);
    let lhs = hs_inner(&simple_tensor(&x, &y), &simple_tensor(&xp, &yp))?;
    let rhs = x.inner(&xp)? * y.inner(&yp)?;
    let scale = (x.norm() * xp.norm() * y.norm() * yp.norm()).max(1.0);
    Ok(Measured::new((lhs - rhs).norm() / scale, format!("C^{dh} (x) C^{dk}")))
}

fn basis_expansion(rng: &mut FrameRng) -> Result<Measured> {
    let (dh, dk) = random_shape(rng);
    let t = random_element(dh, dk, rng);
    Ok(Measured::new(expand_basis(&t).max_error(&t)?, format!("{dh}x{dk}")))
}

fn tight_expansion(rng: &mut FrameRng) -> Result<Measured> {
    let (dh, dk) = (rng.random_range(2..=4), rng.random_range(2..=4));
    let t = random_element(dh, dk, rng);
    let fh = random_tight(dh, rng)?;
    let fk = random_tight(dk, rng)?;
    let e = expand_tight(&t, &fh, &fk)?;
    Ok(Measured::new(
        e.max_error(&t)? / hs_norm(&t),
        format!("{dh}x{dk}, {} and {} frame vectors", fh.len(), fk.len()),
    ))
}

fn tight_inner_product(rng: &mut FrameRng) -> Result<Measured> {
    let (dh, dk) = (rng.random_range(2..=4), rng.random_range(2..=4));
    let q = random_element(dh, dk, rng);
    let t = random_element(dh, dk, rng);
    let expected = hs_inner(&q, &t)?;
    let scale = hs_norm(&q) * hs_norm(&t);
    let mut worst = 0.0f64;
    for _ in 0..2 {
        let fk = random_tight(dk, rng)?;
        worst = worst.max((tight_inner(&q, &t, &fk)? - expected).norm() / scale);
    }
    Ok(Measured::new(worst, format!("{dh}x{dk}, two tight frames")))
}

fn tight_energy_invariance(rng: &mut FrameRng) -> Result<Measured> {
    let (dh, dk) = (rng.random_range(2..=4), rng.random_range(2..=4));
    let t = random_element(dh, dk, rng);
    let a = tight_energy(&t, &random_tight(dk, rng)?)?;
    let b = tight_energy(&t, &random_tight(dk, rng)?)?;
    let n2 = hs_norm(&t).powi(2);
    Ok(Measured::new(rel(a, b).max(rel(a, n2)), format!("{dh}x{dk}")))
}

// ---------------------------------------------------------------------------
// frames of the tensor product

fn product_bounds_2(rng: &mut FrameRng) -> Result<Measured> {
    let f1 = random_small_frame(rng.random_range(2..=3), rng)?;
    let f2 = random_small_frame(rng.random_range(2..=3), rng)?;
    let (b1, b2) = (frame_bounds(&f1)?, frame_bounds(&f2)?);
    let b = op_frame_bounds(&tensor_operator_frame(&f1, &f2)?)?;
    Ok(Measured::new(
        bounds_mismatch(&b, b1.lower * b2.lower, b1.upper * b2.upper),
        format!("({}) (x) ({})", describe(&f1), describe(&f2)),
    ))
}

fn product_bounds_self(f: &Frame, _rng: &mut FrameRng) -> Result<Measured> {
    let b1 = frame_bounds(f)?;
    if !b1.is_frame {
        return Err(Error::NotAFrame { lower: b1.lower, upper: b1.upper });
    }
    let b = frame_bounds(&tensor_frame(&[f, f])?)?;
    Ok(Measured::new(
        bounds_mismatch(&b, b1.lower * b1.lower, b1.upper * b1.upper),
        format!("({}) (x) itself", describe(f)),
    ))
}

fn product_bounds_3(rng: &mut FrameRng) -> Result<Measured> {
    let fs = (0..3)
        .map(|_| random_small_frame(2, rng))
        .collect::<Result<Vec<_>>>()?;
    let bs = fs.iter().map(frame_bounds).collect::<Result<Vec<_>>>()?;
    let b = frame_bounds(&tensor_frame(&[&fs[0], &fs[1], &fs[2]])?)?;
    let lo: f64 = bs.iter().map(|b| b.lower).product();
    let hi: f64 = bs.iter().map(|b| b.upper).product();
    Ok(Measured::new(bounds_mismatch(&b, lo, hi), "three factors in C^2"))
}

fn normalized_tight_closure(rng: &mut FrameRng) -> Result<Measured> {
    let f1 = random_tight(rng.random_range(2..=3), rng)?;
    let f2 = random_tight(rng.random_range(2..=3), rng)?;
    let b = frame_bounds(&tensor_frame(&[&f1, &f2])?)?;
    let resid = (b.lower - 1.0).abs().max((b.upper - 1.0).abs());
    let resid = if b.is_normalized_tight { resid } else { resid.max(f64::INFINITY) };
    Ok(Measured::new(resid, format!("({}) (x) ({})", describe(&f1), describe(&f2))))
}

fn product_estimate_inner(rng: &mut FrameRng) -> Result<Measured> {
    let f1 = random_small_frame(rng.random_range(2..=3), rng)?;
    let f2 = random_small_frame(rng.random_range(2..=3), rng)?;
    let b1 = frame_bounds(&f1)?;
    let t = random_element(f1.dim(), f2.dim(), rng);
    let energy = frametensor::tensor::product_energy(&f1, &f2, &t)?;
    let column = frametensor::hs::frame_column_energy(&t, &f2)?;
    let violation = (b1.lower * column - energy).max(energy - b1.upper * column).max(0.0);
    Ok(Measured::new(violation / (b1.upper * column), describe(&f1)))
}

fn product_estimate_outer(rng: &mut FrameRng) -> Result<Measured> {
    let f2 = random_small_frame(rng.random_range(2..=3), rng)?;
    let b2 = frame_bounds(&f2)?;
    let t = random_element(rng.random_range(2..=3), f2.dim(), rng);
    let column = frametensor::hs::frame_column_energy(&t, &f2)?;
    let n2 = hs_norm(&t).powi(2);
    let violation = (b2.lower * n2 - column).max(column - b2.upper * n2).max(0.0);
    Ok(Measured::new(violation / (b2.upper * n2), describe(&f2)))
}

fn describe_op(of: &OperatorFrame) -> String {
    format!("{} elements in C^{} (x) C^{}", of.len(), of.dim_h(), of.dim_k())
}

fn slice_left_containment(of: &OperatorFrame, rng: &mut FrameRng) -> Result<Measured> {
    let b = op_frame_bounds(of)?;
    let y0 = random_gaussian_vector(of.dim_k(), rng);
    let s = frame_bounds(&slice_left(of, &y0)?)?;
    let n2 = y0.norm_sqr();
    Ok(Measured::new(containment(&s, b.lower * n2, b.upper * n2), describe_op(of)))
}

fn slice_right_containment(of: &OperatorFrame, rng: &mut FrameRng) -> Result<Measured> {
    let b = op_frame_bounds(of)?;
    let x0 = random_gaussian_vector(of.dim_h(), rng);
    let s = frame_bounds(&slice_right(of, &x0)?)?;
    let n2 = x0.norm_sqr();
    Ok(Measured::new(containment(&s, b.lower * n2, b.upper * n2), describe_op(of)))
}

fn tight_slice_constant(rng: &mut FrameRng) -> Result<Measured> {
    let (dh, dk) = [(2, 2), (2, 3), (3, 2)][rng.random_range(0..3)];
    let count = rng.random_range(dh * dk..=(dh * dk).max(6));
    let bound: f64 = rng.random_range(0.5..4.0);
    let flat = random_tight_frame_with(dh * dk, count, rng)?;
    let of = frametensor::tensor::FlattenedView {
        frame: scale_frame(&flat, C64::new(bound.sqrt(), 0.0))?,
    }
    .unflatten(dh, dk)?;
    let a = op_frame_bounds(&of)?.lower;
    let y0 = random_gaussian_vector(dk, rng);
    let x0 = random_gaussian_vector(dh, rng);
    let sl = frame_bounds(&slice_left(&of, &y0)?)?;
    let sr = frame_bounds(&slice_right(&of, &x0)?)?;
    let (cl, cr) = (a * y0.norm_sqr(), a * x0.norm_sqr());
    let resid = bounds_mismatch(&sl, cl, cl).max(bounds_mismatch(&sr, cr, cr));
    let resid = if sl.is_tight && sr.is_tight { resid } else { f64::INFINITY };
    Ok(Measured::new(resid, format!("tight, bound {bound:.3}, {}", describe_op(&of))))
}

fn sandwich_is_frame(of: &OperatorFrame, rng: &mut FrameRng) -> Result<Measured> {
    let y0 = random_gaussian_vector(of.dim_k(), rng);
    let x0 = random_gaussian_vector(of.dim_h(), rng);
    let b = op_frame_bounds(&sandwich_frame(of, &y0, &x0)?)?;
    let shortfall = if b.is_frame {
        0.0
    } else {
        (frametensor::frames::EPS_FRAME * b.upper - b.lower).max(0.0) / b.upper.max(1e-300) + f64::MIN_POSITIVE
    };
    Ok(Measured::new(shortfall, describe_op(of)))
}

/// Column `j` of an antilinear map's matrix is its value on `uⱼ`.
fn composed(tn: &HSElement, tm: &HSElement, y0: &CVector, x0: &CVector) -> Result<CMatrix> {
    let mid = simple_tensor(y0, x0);
    let cols = (0..tm.dim_k())
        .map(|j| apply(tn, &apply(&mid, &apply(tm, &CVector::basis(tm.dim_k(), j))?)?))
        .collect::<Result<Vec<_>>>()?;
    CMatrix::from_columns(&cols)
}

fn sandwich_composition(of: &OperatorFrame, rng: &mut FrameRng) -> Result<Measured> {
    let y0 = random_unit_vector(of.dim_k(), rng);
    let x0 = random_unit_vector(of.dim_h(), rng);
    let sw = sandwich_frame(of, &y0, &x0)?;
    let labels = sw.index_labels().expect("sandwich families are labelled");
    let mut worst = 0.0f64;
    for (elem, &(n, m)) in sw.iter().zip(labels) {
        let oracle = composed(&of.elements()[n], &of.elements()[m], &y0, &x0)?;
        worst = worst.max(elem.matrix().max_abs_diff(&oracle)? / hs_norm(elem).max(1.0));
    }
    Ok(Measured::new(worst, describe_op(of)))
}

fn transform_containment(of: &OperatorFrame, rng: &mut FrameRng) -> Result<Measured> {
    let b = op_frame_bounds(of)?;
    let q = random_invertible(of.dim_h(), rng)?;
    let r = random_invertible(of.dim_k(), rng)?;
    let mut worst = 0.0f64;
    for (qq, rr) in [(Some(&q), None), (None, Some(&r)), (Some(&q), Some(&r))] {
        let tb = op_frame_bounds(&transform(of, qq, rr)?)?;
        if !tb.is_frame {
            return Ok(Measured::new(f64::INFINITY, "transformed family is not a frame"));
        }
        let (lo, hi) = transform_envelope(&b, qq, rr);
        worst = worst.max(containment(&tb, lo, hi));
    }
    Ok(Measured::new(worst, describe_op(of)))
}

fn unitary_invariance(of: &OperatorFrame, rng: &mut FrameRng) -> Result<Measured> {
    let b = op_frame_bounds(of)?;
    let q = random_unitary(of.dim_h(), rng)?;
    let r = random_unitary(of.dim_k(), rng)?;
    let tb = op_frame_bounds(&transform(of, Some(&q), Some(&r))?)?;
    Ok(Measured::new(bounds_mismatch(&tb, b.lower, b.upper), describe_op(of)))
}

fn adjoint_frame_bounds(of: &OperatorFrame, _rng: &mut FrameRng) -> Result<Measured> {
    let b = op_frame_bounds(of)?;
    let ab = op_frame_bounds(&adjoint_frame(of))?;
    Ok(Measured::new(bounds_mismatch(&ab, b.lower, b.upper), describe_op(of)))
}

fn adjoint_involution(of: &OperatorFrame, _rng: &mut FrameRng) -> Result<Measured> {
    let back = adjoint_frame(&adjoint_frame(of));
    let resid = if &back == of { 0.0 } else { of.max_abs_diff(&back)?.max(f64::MIN_POSITIVE) };
    Ok(Measured::new(resid, describe_op(of)))
}

fn frame_operator_factorization(rng: &mut FrameRng) -> Result<Measured> {
    let f1 = random_small_frame(rng.random_range(2..=3), rng)?;
    let f2 = random_small_frame(rng.random_range(2..=3), rng)?;
    let t = random_element(f1.dim(), f2.dim(), rng);
    let brute = op_frame_operator_apply(&tensor_operator_frame(&f1, &f2)?, &t)?;
    let factored = factored_frame_operator(&f1, &f2, &t)?;
    let via_kron = kron_frame_operator_apply(&f1, &f2, &t)?;
    let scale = hs_norm(&brute).max(1e-300);
    let resid = hs_norm(&brute.sub(&factored)?).max(hs_norm(&brute.sub(&via_kron)?)) / scale;
    Ok(Measured::new(resid, format!("({}) (x) ({})", describe(&f1), describe(&f2))))
}

fn tensor_dual_factorization(rng: &mut FrameRng) -> Result<Measured> {
    let f1 = random_small_frame(rng.random_range(2..=3), rng)?;
    let f2 = random_small_frame(rng.random_range(2..=3), rng)?;
    let lhs = op_canonical_dual(&tensor_operator_frame(&f1, &f2)?)?;
    let rhs = tensor_operator_frame(&canonical_dual(&f1)?, &canonical_dual(&f2)?)?;
    Ok(Measured::new(
        op_max_rel_diff(&rhs, &lhs)?,
        format!("({}) (x) ({})", describe(&f1), describe(&f2)),
    ))
}

fn adjoint_dual_commutation(of: &OperatorFrame, _rng: &mut FrameRng) -> Result<Measured> {
    let lhs = op_canonical_dual(&adjoint_frame(of))?;
    let rhs = adjoint_frame(&op_canonical_dual(of)?);
    Ok(Measured::new(op_max_rel_diff(&rhs, &lhs)?, describe_op(of)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let names = check_names();
        let mut dedup = names.clone();
        dedup.dedup();
        assert_eq!(names, dedup);
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let a = run(1, 3, &[]);
        assert!(a.all_pass(), "{}", a.to_table());
        assert_eq!(a.records.len(), 3 * check_names().len());
        let b = run(1, 3, &[]);
        assert_eq!(a.to_json(), b.to_json());
        assert_ne!(a.to_json(), run(2, 3, &[]).to_json());
    }

    #[test]
    fn user_instances_are_appended() {
        let onb = Frame::standard_basis(2);
        let user = [UserInstance::Frame { label: "onb".into(), frame: onb }];
        let report = run(5, 1, &user);
        let frame_checks: Vec<_> = report.records.iter().filter(|r| r.instance == 1).collect();
        assert!(!frame_checks.is_empty());
        assert!(frame_checks.iter().all(|r| r.description.starts_with("onb:")));
        assert!(report.all_pass());
    }

    #[test]
    fn non_frame_user_input_fails_without_panicking() {
        let degenerate = Frame::new(vec![CVector::basis(2, 0)]).unwrap();
        let user = [UserInstance::Frame { label: "e1".into(), frame: degenerate }];
        let report = run(5, 0, &user);
        assert!(!report.all_pass());
        assert!(report.records.iter().any(|r| r.description.contains("not a frame")));
    }
}
