use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for a finished run.
pub const EXIT_OK: i32 = 0;
/// An internal check failed; this indicates a bug.
pub const EXIT_INVARIANT: i32 = 1;
/// Bad parameters or an infeasible request.
pub const EXIT_DOMAIN: i32 = 2;
/// Unreadable, unwritable or malformed files.
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] embedlab_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use embedlab_core::Error as E;
        match self {
            CliError::Core(E::Invariant(_) | E::Numerical { .. }) | CliError::Check(_) => {
                EXIT_INVARIANT
            }
            CliError::Core(E::Format { .. }) | CliError::Io { .. } | CliError::Parse { .. } => {
                EXIT_IO
            }
            CliError::Core(_) | CliError::Usage(_) => EXIT_DOMAIN,
        }
    }

    /// Attach the offending file to a core parse error.
    pub fn in_file(path: &std::path::Path, err: embedlab_core::Error) -> Self {
        match err {
            embedlab_core::Error::Format { location, message } => CliError::Parse {
                path: path.to_path_buf(),
                message: format!("{location}: {message}"),
            },
            other => CliError::Core(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
