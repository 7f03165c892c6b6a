use std::io;

use thiserror::Error;

/// Errors raised anywhere in the simulator and DSP chain.
#[derive(Debug, Error)]
pub enum Error {
    /// A sample buffer or argument failed validation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration value violates its invariant. `key` names the offending entry.
    #[error("invalid configuration `{key}`: {reason}")]
    Config { key: String, reason: String },

    /// Beat or filter frequency is not representable at the sample rate.
    #[error("Nyquist violation: {keys} = {frequency} Hz must lie in (0, {nyquist}) Hz")]
    Nyquist {
        keys: String,
        frequency: f64,
        nyquist: f64,
    },

    /// A PSD or transfer function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Colored-noise synthesis could not realize the requested PSD.
    #[error("noise synthesis failed: {0}")]
    Synthesis(String),

    /// No silent frames were available to estimate the noise spectrum from.
    #[error("noise estimation failed: {0}")]
    Estimation(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("wav: {0}")]
    Wav(#[from] hound::Error),

    #[error("config parse: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error("{path}:{line}: {reason}")]
    Csv {
        path: String,
        line: usize,
        reason: String,
    },
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn input(reason: impl Into<String>) -> Self {
        Error::InvalidInput(reason.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
