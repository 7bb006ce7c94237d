use thiserror::Error;

/// Errors surfaced by channel models, synthesis, the pipeline, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on a physical or geometric argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A scenario or pipeline configuration is internally inconsistent.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The input series is too short for the requested window/operation.
    #[error("series too short: need at least {need} samples, got {got}")]
    SeriesTooShort { need: usize, got: usize },

    /// No two-level backscatter structure could be separated from the series.
    #[error("no backscatter detected: {0}")]
    NoBackscatterDetected(String),

    /// A series/label/report file failed to parse.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn invalid_config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
