use alloc::string::String;

/// Errors raised by the core pipeline stages.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error("image contains no foreground pixels")]
    AllBackground,
    #[error("image of {rows}x{cols} is too small for this operation")]
    TooSmall { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("invalid level count {requested}: must lie in 1..={max} (floor(log2(min(rows, cols))))")]
    InvalidLevel { requested: usize, max: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("training requires at least 2 classes, found {0}")]
    TooFewClasses(usize),
    #[error("split leaves the {0} side empty")]
    EmptySplit(&'static str),
    #[error("label {0} is not in the class map")]
    UnknownLabel(i64),
}

pub type Result<T> = core::result::Result<T, Error>;
