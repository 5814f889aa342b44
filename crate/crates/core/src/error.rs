use crate::model::IndividualId;
use crate::store::StoreError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition of an operation was not met by its caller.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported problem: {0}")]
    UnsupportedProblem(String),

    #[error("individual {0} not found")]
    NotFound(IndividualId),

    /// A generation index or range outside the run, or beyond a size cap.
    #[error("{0}")]
    OutOfRange(String),

    /// The run log failed `validate_run_log`; carries every violation.
    #[error("run log failed validation with {} violation(s)", .0.len())]
    InvalidLog(Vec<String>),

    #[error("computation cancelled")]
    Cancelled,

    #[error(transparent)]
    Store(#[from] StoreError),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
