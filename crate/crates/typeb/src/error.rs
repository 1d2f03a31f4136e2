//! Crate-wide error type.

/// Errors shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("word length {got} does not match 2*{rank}")]
    WordLength { got: usize, rank: usize },

    #[error("invalid signed permutation image {0:?}")]
    InvalidImage(Vec<i64>),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("enumeration cap exceeded: n = {n}, cap = {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("basis too large: {size} words exceed cap {cap}")]
    BasisCapExceeded { size: usize, cap: usize },

    #[error("partition has crossings where a noncrossing one is required")]
    CrossingPartition,

    #[error("index {0} out of range")]
    IndexOutOfRange(i64),

    #[error("Gram matrix numerically singular at level {level}")]
    SingularGram { level: usize },

    #[error("continued fraction diverged (non-finite intermediate value)")]
    ContinuedFractionDiverged,

    #[error("q-number and q-Pochhammer need n >= 1, got {0}")]
    QIndexOutOfRange(i64),

    #[error("measure parameter must exceed -1, got {0}")]
    MeasureParameter(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
