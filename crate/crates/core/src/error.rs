use thiserror::Error;

/// Errors raised across the library.
///
/// The variants line up with the exit-code classes of the command line
/// front end: hypothesis and argument problems, exhausted budgets and
/// malformed input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("budget exceeded: {what} needs {predicted} terms but the budget is {budget}")]
    BudgetExceeded {
        what: String,
        predicted: u128,
        budget: u64,
    },

    #[error("coefficient of {bits} bits exceeds the cap of {cap} bits")]
    CoefficientTooLarge { bits: u64, cap: u64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn budget(what: impl Into<String>, predicted: u128, budget: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            predicted,
            budget,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
