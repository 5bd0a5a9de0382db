use thiserror::Error;

/// Errors raised by the algebra, transform, basis and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("quadratic form is not symmetric positive-definite: {0}")]
    NotPositiveDefinite(String),

    #[error("linear map is singular (|det| = {det:e})")]
    SingularMap { det: f64 },

    #[error("derivative-basis system is numerically singular (pivot ratio {ratio:e})")]
    SolveFailure { ratio: f64 },

    #[error("quadrature spec rejected: {0}")]
    SpecRejected(String),

    #[error("invalid value: {0}")]
    Invalid(String),
}

impl Error {
    /// Short machine-readable code used on the CLI diagnostic stream.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "E_DIM",
            Error::NotPositiveDefinite(_) => "E_SPD",
            Error::SingularMap { .. } => "E_SINGULAR",
            Error::SolveFailure { .. } => "E_SOLVE",
            Error::SpecRejected(_) => "E_SPEC",
            Error::Invalid(_) => "E_INVALID",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
