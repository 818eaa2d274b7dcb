use thiserror::Error;

/// Errors produced by the rcgr library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational: {0}")]
    InvalidRational(String),

    #[error("invalid precision bound: {0}")]
    InvalidPrecision(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    /// `position` is 1-based.
    #[error("rejected symbol {symbol:?} at position {position}")]
    RejectedSymbol { position: usize, symbol: char },

    /// `step` is 1-based.
    #[error("corrupt trace at step {step}: {reason}")]
    CorruptTrace { step: usize, reason: String },

    #[error("trace parse error at line {line}: {message}")]
    TraceParse { line: usize, message: String },

    #[error("FASTA parse error at line {line}: {message}")]
    FastaParse { line: usize, message: String },

    #[error("PPM parse error: {0}")]
    PpmParse(String),

    #[error("invalid image dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },

    #[error("entropy is undefined for an empty sequence")]
    UndefinedEntropy,

    #[error("class {0:?} has no training records")]
    MissingClass(String),

    #[error("invalid class spec {name:?}: {reason}")]
    InvalidClassSpec { name: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
