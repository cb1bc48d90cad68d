//! Weighted SVD bases for radial basis function approximation.
//!
//! A cubature rule `(X, W)` on a planar domain and a radial kernel `Φ` give
//! the scaled kernel matrix `√W·A·√W = Q·Σ²·Qᵀ`, from which this crate builds
//! a basis of `span{Φ(·, xᵢ)}` that is orthonormal in the native space and
//! orthogonal in the discrete `ℓ₂ʷ(X)` product. Interpolants are expanded in
//! that basis and truncated to weighted least-squares approximants by
//! dropping the terms with the smallest singular values.
//!
//! ```
//! use std::sync::Arc;
//! use wsvd::{cubature, Approximant, Domain, Kernel, KernelFamily, Truncation, WsvdBasis};
//!
//! let rule = cubature::polar_rule(&Domain::disk(), 6)?;
//! let kernel = Kernel::new(KernelFamily::Matern3, 4.0)?;
//! let basis = Arc::new(WsvdBasis::build(kernel, rule)?);
//! let interp = Approximant::interpolate(basis.clone(), |p| (p[0] + p[1]).cos())?;
//! let reduced = interp.truncate(Truncation::Order(20))?;
//! let _ = (interp.eval(&[0.5, 0.5]), reduced.eval(&[0.5, 0.5]));
//! # Ok::<(), wsvd::WsvdError>(())
//! ```

pub mod approx;
pub mod basis;
pub mod bench;
pub mod cubature;
pub mod error;
pub mod geometry;
pub mod kernels;

pub use approx::{l2w_error_bound, loo_optimize, Approximant, LooResult, StandardInterpolant, Truncation};
pub use basis::{NystromSpectrum, ScaledMatrix, WsvdBasis, CLAMP_RELATIVE};
pub use cubature::{CubatureRule, RuleKind};
pub use error::{Result, WsvdError};
pub use geometry::{Domain, Point};
pub use kernels::{Kernel, KernelFamily, KernelMatrix, ValidDim};
