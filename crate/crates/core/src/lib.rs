//! Finite frames in tensor products of Hilbert spaces.
//!
//! The crate models finite-dimensional complex Hilbert spaces as `C^d` with
//! the inner product `⟨x, y⟩ = Σ xᵢ·conj(yᵢ)` (linear in the first slot), and
//! the tensor product `H ⊗ K` as the space of antilinear maps `K → H` with
//! finite Hilbert–Schmidt norm. Such a map is stored as a `dim_h × dim_k`
//! matrix `m` acting by `T(y) = m·conj(y)`.
//!
//! Layout:
//!
//! - [`numeric`]: dense complex vectors/matrices, Hermitian Jacobi eigensolver,
//!   Cholesky solve, Kronecker products, seeded random generation.
//! - [`frames`]: frames in a single space: frame operator, optimal bounds,
//!   canonical dual, reconstruction.
//! - [`hs`]: elements of `H ⊗ K` as antilinear maps: simple tensors, adjoints,
//!   Hilbert–Schmidt inner product, basis and tight-frame expansions.
//! - [`tensor`]: frames of `H ⊗ K`: tensor frames, slices, sandwiches,
//!   operator transforms, adjoint frames, factorized frame operators, duals.

pub mod error;
pub mod frames;
pub mod hs;
pub mod numeric;
pub mod tensor;

pub use error::{Error, Result};
pub use frames::{Frame, FrameBounds, FrameOperatorMatrix};
pub use hs::HSElement;
pub use numeric::{CMatrix, CVector, HermitianEig, C64};
pub use tensor::{FlattenedView, OperatorFrame};
