use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("azimuth undefined: rotated normal is parallel to the vertical axis")]
    DegeneratePose,

    #[error("sample series is empty")]
    EmptySeries,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("sample variance is zero")]
    DegenerateVariance,

    #[error("timestamps must be strictly increasing (index {index})")]
    NonMonotonicTimestamps { index: usize },

    #[error("invalid orientation model: {0}")]
    InvalidModel(String),

    #[error("degenerate link geometry: {0}")]
    DegenerateGeometry(String),

    #[error("value {value} lies outside the support [{lo}, {hi}]")]
    OutOfSupport { value: f64, lo: f64, hi: f64 },

    #[error("approximate distribution has zero scale (point mass at {location})")]
    DegenerateScale { location: f64 },

    #[error("invalid channel parameters: {0}")]
    InvalidChannel(String),

    #[error("invalid timing: {0}")]
    InvalidTiming(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("quadrature did not converge (estimate {estimate}, error {error})")]
    Quadrature { estimate: f64, error: f64 },
}
