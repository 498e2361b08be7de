use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library. The CLI maps usage problems to exit
/// code 1 and every variant here to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty dataset")]
    EmptyDataset,

    #[error("no lines in {path}")]
    NoLines { path: PathBuf },

    #[error("line has no word tokens")]
    EmptyLine,

    #[error("split sizes ({n1}, {n2}) do not sum to item count {len}")]
    SplitSizeMismatch { n1: usize, n2: usize, len: usize },

    #[error("count table has {counts} rows but matrix has {matrix}")]
    MisalignedCounts { counts: usize, matrix: usize },

    #[error("degenerate sample: denominator variance is zero")]
    DegenerateSample,

    #[error("unclassifiable character '{ch}' in word \"{word}\"")]
    UnclassifiableCharacter { ch: char, word: String },

    #[error("annotation parse error at column {column}: {message}")]
    Annotation { column: usize, message: String },

    #[error("invalid meter pattern \"{text}\": {reason}")]
    InvalidMeterPattern { text: String, reason: String },

    #[error("invalid position string \"{text}\": {reason}")]
    InvalidPositionString { text: String, reason: String },

    #[error("matrix cell ({row}, {col}): {message}")]
    MatrixCell { row: usize, col: usize, message: String },

    #[error("matrix is not a valid distance matrix: {reason}")]
    InvalidDistanceMatrix { reason: String },

    #[error("counts file line {line}: {message}")]
    CountsParse { line: usize, message: String },

    #[error("{path} line {line}: invalid UTF-8")]
    Encoding { path: PathBuf, line: usize },

    #[error("unknown fixture \"{name}\"; available: {available}")]
    UnknownFixture { name: String, available: String },

    #[error("value at line {line} is not finite")]
    NonFiniteValue { line: usize },

    #[error("arithmetic overflow while accumulating objectives")]
    Overflow,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
