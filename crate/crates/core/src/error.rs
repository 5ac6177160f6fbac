use thiserror::Error;

/// Errors produced by the gasket pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("simplex point must have nonnegative coordinates summing to 1 (sum = {sum})")]
    InvalidSimplexPoint { sum: String },

    #[error("tangent vector components must sum to 0 (sum = {sum})")]
    InvalidTangentVector { sum: String },

    #[error("word must have length >= 2 (got {0})")]
    WordTooShort(usize),

    #[error("constant word {0} is excluded")]
    ConstantWord(String),

    #[error("word symbol {0} is outside 1..=3")]
    BadSymbol(u8),

    #[error("projective image is degenerate: sigma(P y) = 0")]
    DegenerateProjection,

    #[error("derivative is singular; cannot form q/det^2")]
    SingularDerivative,

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid bound inputs: {0}")]
    InvalidBound(String),

    #[error("branch {word} is not contracting (B >= 1); pruning scores are undefined")]
    NonContracting { word: String },

    #[error("operation requires a non-empty working set")]
    EmptySet,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("image encoding failed: {0}")]
    ImageEncoding(String),
}

pub type Result<T> = std::result::Result<T, Error>;
