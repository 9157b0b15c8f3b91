//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime >= 3")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported range (3 <= p <= 10007)")]
    PTooLarge(u64),
    #[error("{a} is not a generator of the multiplicative group mod {p}")]
    NotGenerator { p: u64, a: u64 },
    #[error("discrete log of zero is undefined")]
    LogOfZero,
    #[error("division by zero mod {0}")]
    DivisionByZero(u64),
    #[error("period mismatch: {0} vs {1}")]
    PeriodMismatch(u64, u64),
    #[error("scaling index must be nonzero mod p")]
    ScaleByZero,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("family needs p >= {min}, got p = {p}")]
    PTooSmall { p: u64, min: u64 },
    #[error("operands belong to different prime fields")]
    FieldMismatch,
    #[error("not a valid SL2 matrix: {0}")]
    InvalidMatrix(String),
    #[error("operation is not supported for this family")]
    UnsupportedFamily,
    #[error("a seed is required for sampled pair coverage")]
    SeedRequired,
    #[error("malformed sequence data: {0}")]
    InvalidSequence(String),
}
