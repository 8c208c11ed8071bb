//! Crate-wide error type.

use std::path::PathBuf;

/// Errors raised by corpus handling, network training/recall, metrics and
/// experiment plumbing.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid utf-8 at byte offset {offset}")]
    Decode { offset: usize },

    #[error("empty lexicon")]
    EmptyLexicon,

    #[error("unknown word: {0:?}")]
    UnknownWord(String),

    #[error("pattern set is empty")]
    EmptyPatternSet,

    #[error("degenerate network: need at least 2 units, got {0}")]
    DegenerateNetwork(usize),

    #[error("inhibitor strength must be nonnegative, got {0}")]
    InvalidInhibitor(f64),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("unit index {index} out of range for network of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("lexicon size {lexicon} does not match network size {network}")]
    SizeMismatch { lexicon: usize, network: usize },

    #[error("noise level must lie in [0, 1], got {0}")]
    InvalidNoise(f64),

    #[error("pattern density must lie strictly between 0 and 1, got {0}")]
    InvalidDensity(f64),

    #[error("subcorpus size {requested} exceeds available {available} patterns")]
    SubcorpusSize { requested: usize, available: usize },

    #[error("storage ratio undefined for a network of zero units")]
    ZeroUnits,

    #[error("no recall pairs to evaluate")]
    EmptyPairs,

    #[error("unknown config key: {0}")]
    UnknownConfigKey(String),

    #[error("invalid value for config key {key}: {message}")]
    InvalidConfigValue { key: String, message: String },

    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by the filesystem rather than the data itself.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
