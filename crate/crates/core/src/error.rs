use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid window [{lo}, {hi}): lo must not exceed hi")]
    InvalidWindow { lo: i64, hi: i64 },

    #[error("{value} lies outside the window [{lo}, {hi})")]
    OutOfWindow { value: i64, lo: i64, hi: i64 },

    #[error("enumeration bound exceeded: {what} is {got}, limit {limit}")]
    BoundExceeded { what: &'static str, got: u64, limit: u64 },

    #[error("enumeration budget exceeded: {needed} candidates, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("interval family is empty")]
    EmptyFamily,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
