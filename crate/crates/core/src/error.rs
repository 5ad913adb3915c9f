use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series failed to reach tolerance after {terms} diagonals (last partial sum {partial_sum})")]
    NonConvergence { terms: usize, partial_sum: f64 },

    #[error("indefinite system: pivot {pivot:e} at row {row}")]
    Indefinite { row: usize, pivot: f64 },

    #[error("singular matrix at column {0}")]
    Singular(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("basis index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
