use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Legendre degree must be at least {min}, got {degree}")]
    DegreeTooSmall { degree: usize, min: usize },

    #[error("Legendre degree {degree} exceeds the supported maximum of {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error(
        "Newton iteration for root {index} of P_{degree} did not converge (residual {residual:e})"
    )]
    RootNotConverged {
        degree: usize,
        index: usize,
        residual: f64,
    },

    #[error("quadrature node {root} with derivative {derivative} does not define a weight")]
    InvalidNode { root: f64, derivative: f64 },

    #[error("point count must be at least 1")]
    EmptyDistribution,

    #[error("arcsine cutoff must lie in [0, 1/2), got {0}")]
    InvalidCutoff(f64),

    #[error("bias {0} is not strictly inside (0, 1)")]
    InvalidBias(f64),

    #[error("{what}: expected length {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown attack strategy `{0}`")]
    UnknownStrategy(String),

    #[error("invalid strategy profile: {0}")]
    InvalidProfile(String),

    #[error("expected coalition score is {mu}; d_l is undefined")]
    DegenerateMean { mu: f64 },

    #[error("numerical integration did not converge (error estimate {estimate:e})")]
    IntegrationFailed { estimate: f64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
