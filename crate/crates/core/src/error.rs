use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A point, map, or set was used with an incompatible ambient dimension.
    #[error("dimension mismatch: expected {expected}, found {found} ({context})")]
    DimensionMismatch {
        expected: usize,
        found: usize,
        context: &'static str,
    },

    /// Polynomial text that does not conform to the term syntax.
    #[error("polynomial parse error at column {col}: {msg}")]
    PolyParse { col: usize, msg: String },

    /// A box with lo > hi in some coordinate, or an empty bound list.
    #[error("invalid box: {0}")]
    InvalidBox(String),

    /// Solver or problem configuration that violates its invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
