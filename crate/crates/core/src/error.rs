use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size limit exceeded: {0}")]
    Size(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("points too close for the bialternant (min separation {separation:e} < {threshold:e})")]
    NearCoincident { separation: f64, threshold: f64 },
    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),
    #[error("non-diagonal matrix part where basis coordinates are required")]
    NonDiagonal,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
