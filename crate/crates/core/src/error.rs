use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid element for space `{space}`: {detail}")]
    InvalidElement { space: String, detail: String },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown identifier `{id}` (valid: {valid})")]
    UnknownId { id: String, valid: String },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for I/O and parse failures, as opposed to errors raised by the
    /// computation itself.
    pub fn is_io_or_format(&self) -> bool {
        matches!(
            self,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) | Error::Format(_)
        )
    }
}
