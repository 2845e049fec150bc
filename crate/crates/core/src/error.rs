use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot decode image {path}: {reason}")]
    Decode { path: PathBuf, reason: String },

    #[error("expected {expected}, got {actual}")]
    Dimension { expected: String, actual: String },

    #[error("no images found under {0}")]
    EmptyDataset(PathBuf),

    #[error("class {class} has {count} member(s); stratified split needs at least 2")]
    DegenerateClass { class: u8, count: usize },

    #[error("invalid format: {0}")]
    Format(String),

    #[error("feature cache truncated: expected {expected} bytes, found {actual}")]
    Truncation { expected: u64, actual: u64 },

    #[error("labels contain a single class; both classes are required")]
    SingleClass,

    #[error("length mismatch: {0} labels vs {1} scores")]
    LengthMismatch(usize, usize),

    #[error("no positive labels; average precision is undefined")]
    NoPositives,

    #[error("cache {path} conflicts with the request: {reason}")]
    CacheConflict { path: PathBuf, reason: String },

    #[error("checksum mismatch for {0}; file was modified after it was written")]
    Integrity(PathBuf),

    #[error("missing artifact {0}")]
    MissingArtifact(PathBuf),

    #[error("no metrics found under {0}")]
    NoResults(PathBuf),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error in {context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable identifier used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Decode { .. } => "DecodeError",
            Error::Dimension { .. } => "DimensionError",
            Error::EmptyDataset(_) => "EmptyDatasetError",
            Error::DegenerateClass { .. } => "DegenerateClassError",
            Error::Format(_) => "FormatError",
            Error::Truncation { .. } => "TruncationError",
            Error::SingleClass => "SingleClassError",
            Error::LengthMismatch(..) => "LengthMismatchError",
            Error::NoPositives => "NoPositivesError",
            Error::CacheConflict { .. } => "CacheConflictError",
            Error::Integrity(_) => "IntegrityError",
            Error::MissingArtifact(_) => "MissingArtifactError",
            Error::NoResults(_) => "NoResultsError",
            Error::Config(_) => "ConfigError",
            Error::Io { .. } => "IoError",
            Error::Json { .. } => "JsonError",
            Error::Csv(_) => "CsvError",
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn dimension(expected: impl ToString, actual: impl ToString) -> Self {
        Error::Dimension {
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}
