use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Domain(String),

    #[error("parameter {value} outside [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },

    #[error("index {index} out of bounds for length {len}")]
    Index { index: usize, len: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A rejection loop hit its cap.
    #[error("gave up after {rejects} consecutive rejections at step {step}")]
    Mixing { rejects: u64, step: u64 },

    #[error("segment endpoints coincide")]
    DegenerateSegment,

    #[error("input is not an ultrametric within tolerance {tol}")]
    NotUltrametric { tol: f64 },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
