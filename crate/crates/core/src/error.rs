use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid program text: {0}")]
    ProgramText(String),

    #[error("smoothing must be strictly positive, got {0}")]
    NonPositiveSmoothing(f64),

    #[error("malformed Q table: {0}")]
    QTable(String),

    #[error("enumeration guard exceeded: {what} = {value} (limit {limit})")]
    Guard { what: &'static str, value: u64, limit: u64 },

    #[error("prefix {0:?} has no continuation in the corpus")]
    UndefinedPrefix(Vec<u8>),

    #[error("no record of length {0} to normalize over")]
    EmptyRetainedSet(usize),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("malformed input for task {task}: {reason}")]
    MalformedTaskInput { task: &'static str, reason: String },

    #[error("unknown task {0:?}")]
    UnknownTask(String),

    #[error("unknown baseline {0:?}")]
    UnknownBaseline(String),

    #[error("alphabet mismatch: predictor has {predictor} symbols, shard has {shard}")]
    AlphabetMismatch { predictor: usize, shard: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("shard format error: {0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
