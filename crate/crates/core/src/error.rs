use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state space: {0}")]
    InvalidStateSpace(String),

    #[error("invalid model matrix: {0}")]
    InvalidModel(String),

    #[error("the constant vector is not in the row span of the model matrix")]
    ConstantNotInRowSpan,

    #[error("the cone of nonnegative vectors orthogonal to the kernel is {{0}}")]
    ConeIsZero,

    #[error("enumeration of {size} candidate vectors exceeds the limit of {limit}")]
    EnumerationTooLarge { size: f64, limit: f64 },

    #[error("enumeration bound must be at least 1")]
    InvalidBound,

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("every monomial vanishes: no probability is defined for these parameters")]
    AllMonomialsZero,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("density is not normalized: total mass {mass}")]
    NotNormalized { mass: String },

    #[error("operation requires an exact rational density")]
    NotExact,

    #[error("state subset is empty")]
    EmptySubset,

    #[error("state index {0} out of range")]
    StateOutOfRange(usize),

    #[error("vector is not in the row span of the model matrix")]
    NotInRowSpan,

    #[error("invalid beta schedule: {0}")]
    InvalidSchedule(String),

    #[error("limit path did not converge: last beta {last_beta}, gap {gap:e}")]
    NoConvergence { last_beta: f64, gap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
