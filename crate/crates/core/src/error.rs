use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("level {level} out of range for a four-level system")]
    LevelOutOfRange { level: usize },

    #[error("photon number {n} out of range (cavity truncation n_max = {n_max})")]
    PhotonOutOfRange { n: usize, n_max: usize },

    #[error("qudit id {0} is not one of 1, 2, 3")]
    InvalidQudit(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max |A - A†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("rate for {channel} must be non-negative, got {rate}")]
    NegativeRate { channel: &'static str, rate: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl SimError {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        SimError::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
