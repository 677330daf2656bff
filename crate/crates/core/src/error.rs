use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("interference integral diverges for path-loss exponent {eta} (must exceed 2)")]
    DivergentIntegral { eta: f64 },

    #[error("quadrature did not converge: estimated error {achieved:e} exceeds requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("pattern holds {available} points but {requested} were requested")]
    InsufficientPoints { requested: usize, available: usize },

    #[error("observation window too small: {0}")]
    WindowTooSmall(String),

    #[error("no samples: {0}")]
    NoSamples(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
