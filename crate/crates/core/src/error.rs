use alloc::string::String;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown profile `{0}`")]
    UnknownProfile(String),
    #[error("too few samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("resonance: {quantity} for mode n={mode} has magnitude {magnitude:e}")]
    Resonance { quantity: &'static str, mode: i64, magnitude: f64 },
    #[error("singular system: {0}")]
    Singular(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("forward solve failed: {0}")]
    Forward(String),
}

impl Error {
    /// True for errors caused by the inputs rather than by the numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_) | Error::UnknownProfile(_) | Error::InsufficientSamples { .. }
        )
    }
}
