use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("graph is disconnected: vertex {from} cannot reach vertex {to}")]
    Disconnected { from: usize, to: usize },

    #[error("pairing model rejected {attempts} samples without producing a simple graph")]
    ResamplingExhausted { attempts: u64 },

    #[error("instance too large: {0}")]
    Scale(String),

    #[error("no certified graph on {n} vertices reached h >= {epsilon}; best bound {best}")]
    EpsilonInfeasible { n: usize, epsilon: f64, best: f64 },

    #[error("threshold {threshold} exceeds the largest distance {max_distance}")]
    Threshold { threshold: f64, max_distance: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {message}\n{dump}")]
    Numerical { message: String, dump: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("malformed input at {location}: {message}")]
    Format { location: String, message: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// Wrap a serde_json failure, keeping its line and column.
    pub fn from_json(err: serde_json::Error) -> Self {
        let mut message = err.to_string();
        // the location is reported separately
        let suffix = format!(" at line {} column {}", err.line(), err.column());
        if message.ends_with(&suffix) {
            message.truncate(message.len() - suffix.len());
        }
        Error::Format {
            location: format!("line {}, column {}", err.line(), err.column()),
            message,
        }
    }
}
