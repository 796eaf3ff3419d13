use thiserror::Error;

/// Errors produced by mesh construction, the spatial operators, the stepper
/// and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular pivot {pivot:e} at row {row}")]
    SingularPivot { row: usize, pivot: f64 },

    #[error("fast integral path requires a time-independent kernel")]
    NonStationaryKernel,

    #[error("negative H1 quadratic form {0:e}")]
    NegativeSeminorm(f64),

    #[error("solver failed at step {step}: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl Error {
    /// Process exit code: 2 for configuration problems, 3 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::Config(_) | Error::Io(_) | Error::Csv(_) => 2,
            Error::SingularPivot { .. } | Error::NonStationaryKernel | Error::NegativeSeminorm(_) | Error::StepFailed { .. } => 3,
        }
    }
}
