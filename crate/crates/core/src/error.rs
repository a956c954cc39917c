use thiserror::Error;

/// Errors raised by the linear-algebra layer, the game model and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is empty")]
    Empty,

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max entrywise asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("numerical failure: {message}")]
    Numerical {
        message: String,
        iteration: Option<usize>,
    },

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    /// The observable is a scalar multiple of the identity; every pair of
    /// states is an exact equilibrium with the given value.
    #[error("degenerate game: observable is {value} times the identity")]
    DegenerateGame { value: f64 },

    #[error("invalid solver parameters: {0}")]
    InvalidParams(String),

    #[error("instance is not strictly positive: {which} has minimum eigenvalue {min_eigenvalue:e}")]
    NotStrictlyPositive {
        which: &'static str,
        min_eigenvalue: f64,
    },

    #[error("super-operator is not positive: probe image has minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error(
        "certified lower value {value_lo:e} is not positive, so the optimum cannot be bounded above; \
         retry with a smaller epsilon"
    )]
    ValueTooSmall { value_lo: f64 },
}

impl Error {
    pub(crate) fn dimension(context: &'static str, expected: usize, found: usize) -> Self {
        Error::Dimension {
            context,
            expected,
            found,
        }
    }

    pub(crate) fn at_iteration(self, j: usize) -> Self {
        match self {
            Error::Numerical { message, .. } => Error::Numerical {
                message,
                iteration: Some(j),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
