//! Numerical thresholds shared across the crate.
//!
//! All thresholds are relative to the natural scale of the quantity being
//! tested: `‖x‖²` for isotropy, the largest eigenvalue magnitude for rank
//! decisions, `‖a‖‖b‖` for orthogonality of two vectors.

/// Default certification tolerance for isotropy, Gram residuals and
/// orthogonality tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative eigenvalue / singular value threshold for signature and rank.
pub const RANK_TOL: f64 = 1e-9;

/// Modulus ties below this relative gap resolve to the lowest index.
pub const TIE_TOL: f64 = 1e-12;

/// Representatives whose split norm is within this of 1 are already on the
/// cross-section and are returned unchanged.
pub const SECTION_SNAP: f64 = 1e-13;

/// Finite-difference step for the stratum dimension estimate.
pub const FD_STEP: f64 = 1e-5;

/// Relative singular value threshold for finite-difference Jacobian ranks.
pub const FD_RANK_TOL: f64 = 1e-6;
