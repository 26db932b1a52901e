use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("level must be at least 1, got {0}")]
    InvalidLevel(u32),
    #[error("modulus {ell}^{level} does not fit in 64 bits")]
    ModulusOverflow { ell: u64, level: u32 },
    #[error("matrix is not invertible (determinant has positive valuation)")]
    NotInvertible,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live over different residue rings")]
    RingMismatch,
    #[error("tensor power {0} of an alternating form is not alternating")]
    NotAlternating(u32),
    #[error("form is degenerate or not alternating")]
    InvalidForm,
    #[error("matrix is not a symplectic similitude")]
    NotSimilitude,
    #[error("point does not have order dividing {ell}^{level}")]
    OrderTooLarge { ell: u64, level: u32 },
    #[error("enumeration would exceed the cap of {cap} elements")]
    CapExceeded { cap: u64 },
    #[error("operation requires a materialized group")]
    NotMaterialized,
    #[error("congruence chain is not increasing")]
    ChainNotIncreasing,
    #[error("expectation failed: {0}")]
    ExpectationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
