use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field order {p}^{e} exceeds the supported maximum of {max}")]
    OrderTooLarge { p: u64, e: u32, max: u64 },

    #[error("characteristic 2 collapses to first kind")]
    CharacteristicTwo,

    #[error("inversion of zero")]
    ZeroInverse,

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("element {0:?} is not a valid element of this field")]
    InvalidElement(Vec<u64>),

    #[error("kind parameter {0} is not supported (expected 0, 1 or 2)")]
    UnsupportedKind(u32),

    #[error("index {index} is outside {lo}..={hi}")]
    IndexOutOfRange { index: u64, lo: u64, hi: u64 },

    #[error("coefficient recursion is inconsistent at index {index}")]
    InconsistentRecursion { index: u64 },

    #[error("internal arithmetic error: {0}")]
    Internal(String),
}
