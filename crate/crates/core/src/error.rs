use thiserror::Error;

/// Error type shared by every module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid posit format ({n},{es}): {reason}")]
    InvalidFormat { n: u32, es: u32, reason: &'static str },

    #[error("pattern {pattern:#x} does not fit in {n} bits")]
    PatternOutOfRange { pattern: u32, n: u32 },

    #[error("operand formats disagree: {lhs} vs {rhs}")]
    FormatMismatch { lhs: String, rhs: String },

    #[error("NaR has no real value")]
    NarValue,

    #[error("cannot parse {0:?} as a posit literal")]
    BadLiteral(String),

    #[error("fraction argument {0} outside [0, 1)")]
    FractionDomain(String),

    #[error("exhaustive sweep needs n <= {max}, got n = {n}")]
    SweepTooLarge { n: u32, max: u32 },

    #[error("non-finite parameter {value} at layer {layer}, index {index}")]
    NonFiniteWeight { layer: usize, index: usize, value: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("bad model file: {0}")]
    BadModel(String),

    #[error("bad dataset: {0}")]
    BadDataset(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
