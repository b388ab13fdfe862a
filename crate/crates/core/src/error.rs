use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("a sequence set needs at least one sequence")]
    EmptySet,

    #[error("sequence {index} has period {found}, expected {expected}")]
    PeriodMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("sequence period must be positive")]
    EmptySequence,

    #[error("dimension mismatch: expected {expected} entries, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("tuple must contain at least one user")]
    EmptyTuple,

    #[error("tuple indices must be strictly increasing and below {k}: {tuple:?}")]
    InvalidTuple { tuple: Vec<usize>, k: usize },

    #[error("MPR capability {gamma} out of range; need 1 <= gamma < K = {k}")]
    GammaOutOfRange { gamma: usize, k: usize },

    #[error("invalid duty factor {0}: must lie in [0, 1]")]
    InvalidDutyFactor(String),

    #[error("enumeration needs {needed} slot evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("precondition not satisfied: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("structural theorem contradicted: {0}")]
    TheoremViolation(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
