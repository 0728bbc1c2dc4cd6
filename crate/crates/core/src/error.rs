use thiserror::Error;

use crate::pseudoherm::Signature;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid signature ({p},{q}): both parts must be at least 1")]
    InvalidSignature { p: usize, q: usize },

    #[error("signature mismatch: expected {expected}, found {found}")]
    SignatureMismatch {
        expected: Signature,
        found: Signature,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("not isotropic: relative residual {residual:e} exceeds {tol:e}")]
    NotIsotropic { residual: f64, tol: f64 },

    #[error("degenerate subspace: {0}")]
    DegenerateSubspace(String),

    #[error("operation requires signature (1,1), got {0}")]
    UnsupportedSignature(Signature),

    #[error("unsupported frame: {0}")]
    UnsupportedFrame(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("form is singular: {0}")]
    Singular(String),

    #[error("internal contract violated: {0}")]
    InternalContract(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
