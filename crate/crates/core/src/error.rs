use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spin label: {0}")]
    InvalidSpin(String),

    #[error("magnetic quantum number 2m = {two_m} out of range for 2j = {two_j}")]
    ProjectionOutOfRange { two_j: u32, two_m: i64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed matrix JSON: {0}")]
    MatrixFormat(String),

    #[error("property {0} does not hold at the origin")]
    PropertyFailsAtOrigin(String),

    #[error("at lambda = ({lambdas}): {source}")]
    AtPoint { lambdas: String, source: Box<Error> },
}

impl Error {
    /// True for failures of the numerical kernels, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoConvergence { .. }
            | Error::NotHermitian { .. }
            | Error::PropertyFailsAtOrigin(_) => true,
            Error::AtPoint { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
