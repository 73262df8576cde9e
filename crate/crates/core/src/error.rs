use thiserror::Error;

/// Errors produced by corpus ingestion and the analysis routines.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("malformed record at line {line}: {message}")]
    MalformedRecord { line: usize, message: String },

    #[error("duplicate post id `{id}`")]
    DuplicateId { id: String },

    #[error("post `{id}`: {message}")]
    InvalidPost { id: String, message: String },

    #[error("{count} post(s) reference missing parents: {}", sample.join(", "))]
    DanglingParents { count: usize, sample: Vec<String> },

    #[error("{count} post(s) unreachable from any submission (cycle or detached chain): {}", sample.join(", "))]
    UnreachablePosts { count: usize, sample: Vec<String> },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("histogram binning mismatch: {0}")]
    BinningMismatch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CoreError {
    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        CoreError::InvalidArgument(msg.into())
    }

    pub fn empty_input(msg: impl Into<String>) -> Self {
        CoreError::EmptyInput(msg.into())
    }
}
