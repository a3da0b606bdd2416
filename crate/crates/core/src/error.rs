use thiserror::Error;

/// Errors raised across the estimation pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("tail index alpha = {0} outside the supported range")]
    AlphaOutOfRange(f64),

    #[error("invalid stable parameters: {0}")]
    InvalidStableParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("density quadrature did not converge at x = {x} (estimated error {estimate:e})")]
    QuadratureNonConvergence { x: f64, estimate: f64 },

    #[error("density underflow at x = {0}")]
    DensityUnderflow(f64),

    #[error("likelihood maximum not bracketed inside [{lower}, {upper}]")]
    NoInteriorMaximum { lower: f64, upper: f64 },

    #[error("parameters violate the admissible region: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("frequency {0} is a singular point of the transfer function")]
    SingularFrequency(f64),

    #[error("joint CF truncation tail {tail:e} exceeds tolerance {tolerance:e}")]
    TruncationTail { tail: f64, tolerance: f64 },

    #[error("periodogram is identically zero")]
    DegenerateSpectrum,

    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("interrupted before completion")]
    Interrupted,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
