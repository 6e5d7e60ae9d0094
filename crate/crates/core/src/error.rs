use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("division by a complex number of modulus {0:e}")]
    DivisionByZero(f64),
    #[error("matrix is singular (pivot {pivot} has modulus {modulus:e})")]
    SingularMatrix { pivot: usize, modulus: f64 },
    #[error("diagonal entry {0} is zero; splitting has a singular A1")]
    ZeroDiagonal(usize),
    #[error("{what} failed to converge after {iterations} iterations")]
    ConvergenceFailure { what: &'static str, iterations: usize },
    #[error("tridiagonal Toeplitz closed form needs a*c >= 0, got {0:e}")]
    NegativeProduct(f64),
    #[error("sequence term a_{index} = {value:e} is not positive")]
    NonPositiveTerm { index: usize, value: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Stable diagnostic prefix used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) | Error::IndexOutOfRange { .. } => "E_DIM",
            Error::DivisionByZero(_) | Error::SingularMatrix { .. } | Error::ZeroDiagonal(_) => {
                "E_SINGULAR"
            }
            Error::ConvergenceFailure { .. } => "E_EIG",
            Error::Parse { .. } | Error::Io(_) => "E_IO",
            Error::NegativeProduct(_)
            | Error::NonPositiveTerm { .. }
            | Error::Domain(_)
            | Error::InsufficientData(_) => "E_USAGE",
        }
    }
}
