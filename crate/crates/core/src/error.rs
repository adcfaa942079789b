use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix dimension must be nonzero")]
    EmptyDimension,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0} is not a prime modulus")]
    NotPrime(u32),

    #[error("entry {value} out of range for modulus {modulus}")]
    EntryOutOfRange { value: u32, modulus: u32 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("box packing certificate failed: rank {rank}, expected {expected}")]
    CertificateFailed { rank: usize, expected: usize },

    #[error("scheme failed validation: {0}")]
    InvalidScheme(String),

    #[error("scheme is not valid over GF({0})")]
    FieldMismatch(u32),

    #[error("digit {digit} outside transmit alphabet {lo}..={hi}")]
    DigitOutOfAlphabet { digit: u64, lo: u64, hi: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}
