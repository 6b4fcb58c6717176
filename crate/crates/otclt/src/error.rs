use thiserror::Error;

/// Errors produced by the library.
///
/// The variants split into three families that the command-line front end
/// maps onto exit codes: input problems (bad files, shapes, arguments),
/// configuration problems (unsupported cost or generator settings) and
/// numerical failures (non-finite quadrature, budget overruns, invalid
/// delta-method preconditions).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cost rejected: {0}")]
    CostRejected(String),

    #[error("non-finite cost c(x_{i}, y_{j}) = {value}")]
    NonFiniteCost { i: usize, j: usize, value: f64 },

    #[error("problem size {pairs} pairs exceeds the memory budget of {budget} pairs")]
    MemoryBudget { pairs: usize, budget: usize },

    #[error("dual pair is infeasible: u_{i} + v_{j} exceeds c_ij by {excess:e}")]
    InfeasibleDuals { i: usize, j: usize, excess: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("P=Q indistinguishable; delta method invalid (W_p = {0:e})")]
    Separation(f64),

    #[error("replication {rep}: {source}")]
    Replication {
        rep: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors caused by a numerical failure rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Numerical(_)
            | Error::Separation(_)
            | Error::MemoryBudget { .. }
            | Error::NonFiniteCost { .. } => true,
            Error::Replication { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
