use thiserror::Error;

/// Errors produced by the time-frequency toolkit.
#[derive(Debug, Error)]
pub enum TfError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("Wigner matrix not real: imaginary residue {residue:e} exceeds 1e-10 x peak {peak:e}")]
    RealnessViolation { residue: f64, peak: f64 },
    #[error("matrix has {0} values, expected real-valued input")]
    WrongValueKind(&'static str),
    #[error("size guard exceeded: n = {n} > {max}")]
    SizeGuard { n: usize, max: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, TfError>;
