use std::path::PathBuf;

/// Failures of the file formats and commands.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The configuration is missing, unreadable or inconsistent.
    #[error("config error: {0}")]
    Config(String),

    /// A file could not be read or written.
    #[error("{}: {source}", path.display())]
    Io {
        /// File involved.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },

    /// A data file violates its schema.
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        /// File being parsed.
        path: PathBuf,
        /// One-based line number.
        line: u64,
        /// What is wrong.
        message: String,
    },

    /// A model rejected its input or failed to converge.
    #[error("{context}: {source}")]
    Model {
        /// Operation that failed.
        context: String,
        /// Model error.
        source: sawfocus_core::Error,
    },
}

/// Result alias for the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code: 3 for numerical failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Model { source, .. } if source.is_numerical() => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn model(context: impl Into<String>) -> impl FnOnce(sawfocus_core::Error) -> Self {
        let context = context.into();
        move |source| Error::Model { context, source }
    }
}
