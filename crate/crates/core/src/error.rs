use thiserror::Error;

/// Errors raised across the toolbox.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("summary curve kind mismatch: expected {expected}, got {actual}")]
    KindMismatch {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("no defined radius inside [{lo}, {hi}]")]
    NoDefinedRadius { lo: f64, hi: f64 },

    #[error("unknown signal `{name}`; available: {available}")]
    UnknownSignal { name: String, available: String },

    #[error("unknown method `{name}`; available: {available}")]
    UnknownMethod { name: String, available: String },

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),

    #[error("signal has zero energy")]
    ZeroEnergy,

    #[error("unsupported wav: {0}")]
    UnsupportedWav(String),

    #[error("wav: {0}")]
    Wav(#[from] hound::Error),

    #[error("config: {0}")]
    Config(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
