use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {degree} exceeds the configured maximum {max}")]
    Capacity { degree: usize, max: usize },

    #[error("invalid ensemble parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Berezin density undefined: kernel diagonal vanishes at the center")]
    DegenerateCenter,

    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("sampler stalled after {proposals} consecutive proposals with acceptance below {threshold}")]
    SamplerStall { proposals: u64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
