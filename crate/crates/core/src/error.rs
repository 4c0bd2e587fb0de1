use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("extension degree {0} outside 1..=64")]
    BadDegree(u32),
    #[error("modulus is not monic of the stated degree")]
    NotMonic,
    #[error("modulus {0:#x} is not irreducible over F_2")]
    NotIrreducible(u128),
    #[error("no irreducible modulus found for degree {0}")]
    NoModulusFound(u32),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("bad hex literal: {0}")]
    BadHex(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("count overflows 128 bits")]
    Overflow,
    #[error("division is not exact: nonzero remainder")]
    NotDivisible,
    #[error("arity mismatch: expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("tuple is F_2-linearly dependent")]
    DependentBasis,
    #[error("contradiction: k = {k} derived both in K_{n} and SF_{n}")]
    ContradictionDetected { n: u32, k: u32 },
    #[error("splitting field degree {0} exceeds 64")]
    SplittingFieldTooLarge(u32),
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
