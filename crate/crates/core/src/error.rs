use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ground set of size {n} does not fit in a {width}-bit mask")]
    WidthOverflow { n: usize, width: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported field order {0}; supported orders are 2,3,4,5,7,8,9,11,13,16")]
    UnsupportedField(u64),

    #[error("budget exceeded: {what} requires {required}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: String,
        budget: u64,
    },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
