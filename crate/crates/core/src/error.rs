use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("group spec mismatch: expected {expected}, found {found}")]
    SpecMismatch { expected: String, found: String },

    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("element does not belong to {spec}: {reason}")]
    InvalidElement { spec: String, reason: String },

    #[error("dyadic exponent {0} exceeds the supported maximum of {max}", max = crate::group::MAX_DYADIC_EXPONENT)]
    DyadicOverflow(u32),

    #[error("window too large: {size} elements exceeds cap {cap}")]
    WindowTooLarge { size: String, cap: usize },

    #[error("search budget exhausted after {spent} membership evaluations (budget {budget})")]
    BudgetExceeded { spent: u64, budget: u64 },

    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("invariant undefined for this group: {0}")]
    Unsupported(String),

    #[error("window {index} of {recipe} is empty")]
    EmptyWindow { recipe: String, index: u64 },

    #[error("construction failed at step {step}: {reason}")]
    ConstructionFailed { step: usize, reason: String },

    #[error("witness does not verify: {0}")]
    Unverified(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
