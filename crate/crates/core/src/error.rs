use crate::ring::Rational;

/// Errors raised by the exact algebra routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("operation `{0}` needs an ordered ring")]
    UnsupportedRing(&'static str),
    #[error("invalid interval: {lo} is not below {hi}")]
    InvalidInterval { lo: Box<Rational>, hi: Box<Rational> },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(Box<Rational>),
    #[error("lag must be positive")]
    InvalidLag,
    #[error("witness does not verify: {0}")]
    InvalidWitness(String),
    #[error("matrix is not invertible over the ring")]
    NotAUnit,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("trace precondition failed: diagonal t^{k} coefficients sum to {sum}")]
    TracePrecondition { k: usize, sum: Box<Rational> },
    #[error("norm precondition failed at step {step}: norm {norm} exceeds {bound}")]
    NeedsShrinking { step: usize, norm: Box<Rational>, bound: Box<Rational> },
    #[error("invalid elementary operation at index {index}: {reason}")]
    InvalidOp { index: usize, reason: String },
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
