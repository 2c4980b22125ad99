use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sample rate: {0}")]
    InvalidSampleRate(String),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("payload of {len} bytes exceeds the {max}-byte frame limit")]
    PayloadSize { len: usize, max: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("plan inconsistent with chip stream: {0}")]
    Consistency(String),

    #[error("no LoRa preamble found")]
    DetectionFailed,

    #[error("uncorrectable codeword {codeword} in interleaver block {block}")]
    Uncorrectable { block: usize, codeword: usize },

    #[error("malformed file {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("missing sidecar {0}; pass the sample rate explicitly")]
    MissingSidecar(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag used in JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSampleRate(_) => "invalid-sample-rate",
            Error::InvalidParams(_) => "invalid-params",
            Error::Domain(_) => "domain",
            Error::PayloadSize { .. } => "payload-size",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::Consistency(_) => "consistency",
            Error::DetectionFailed => "detection-failed",
            Error::Uncorrectable { .. } => "uncorrectable",
            Error::Format { .. } => "format",
            Error::MissingSidecar(_) => "missing-sidecar",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
