use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("expansion parameter |Δ| = {delta:.3e} is outside the validity range (< {limit})")]
    ExpansionInvalid { delta: f64, limit: f64 },

    #[error("resonance condition violated: n + l = {sum} must be odd")]
    Resonance { sum: u32 },

    #[error("degenerate mode pair: n = l = {0}")]
    DegeneratePair(u32),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("covariance matrix is singular or ill-conditioned (condition number {condition:.3e})")]
    Conditioning { condition: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("validation failed: {}", .0.join(", "))]
    Validation(Vec<String>),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Conditioning { .. } | Error::DegenerateFit(_) | Error::DimensionMismatch { .. }
        )
    }
}
