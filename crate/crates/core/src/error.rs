use thiserror::Error;

/// Errors produced by the library and the experiment runner.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WsvdError {
    #[error("points {first} and {second} are duplicates (distance {distance:e})")]
    DuplicatePoints { first: usize, second: usize, distance: f64 },
    #[error("at least {required} points are required, got {got}")]
    TooFewPoints { required: usize, got: usize },
    #[error("domain `{0}` is not supported by this cubature rule")]
    UnsupportedDomain(String),
    #[error("degenerate cubature rule: {0}")]
    DegenerateRule(String),
    #[error("symmetric eigensolver did not converge")]
    EigenFailure,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("kernel matrix is numerically singular (condition estimate {condition_estimate:e})")]
    SingularMatrix { condition_estimate: f64 },
    #[error("evaluation grid is empty")]
    EmptyGrid,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, WsvdError>;

impl From<std::io::Error> for WsvdError {
    fn from(err: std::io::Error) -> Self {
        WsvdError::Io(err.to_string())
    }
}

impl From<csv::Error> for WsvdError {
    fn from(err: csv::Error) -> Self {
        WsvdError::Io(err.to_string())
    }
}
