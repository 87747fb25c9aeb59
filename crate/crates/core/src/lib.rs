//! Resolvent-norm estimates for `n × n` contractions whose spectral radius is
//! bounded by `r < 1`.
//!
//! The central quantity is
//!
//! ```text
//! R(n, r) = sup { ‖(ζ − T)⁻¹‖ : ‖T‖ ≤ 1, ρ(T) ≤ r },   |ζ| = 1,
//! ```
//!
//! which equals `‖(1 − T*)⁻¹‖ = ‖X_{1+r}‖ / (1 − r)` for an explicit
//! lower-triangular Toeplitz matrix `T*`. The crate computes it through a
//! scalar root equation ([`toeplitz_norm`]), and carries enough model-space
//! machinery ([`blaschke`], [`model_operator`], [`interpolation_bounds`]) to
//! cross-check every step numerically. [`verifier`] runs seeded randomized
//! probes over random contractions.

pub mod blaschke;
pub mod error;
pub mod interpolation_bounds;
pub mod linalg;
pub mod model_operator;
pub mod toeplitz_norm;
pub mod verifier;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, RngStream};
pub use num_complex::Complex64;

/// Relative accuracy used for spectral norms when the caller does not care.
pub const DEFAULT_NORM_TOL: f64 = 1e-12;
