//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An operation received input with nothing to work on.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// Every word in a chunk classified as Unknown, so no ratio exists.
    #[error("no classifiable words in chunk")]
    NoClassifiableWords,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Profiles from different language pipelines cannot be compared.
    #[error("profiles have different language modes")]
    ModeMismatch,

    #[error("a lexicon is required for romanized-sinhala comparison")]
    MissingLexicon,

    #[error("transition graph has no edges")]
    EmptyGraph,

    #[error("corpus too small: {0}")]
    InsufficientCorpus(String),

    #[error("too few rows: need at least {need}, have {have}")]
    TooFewRows { need: usize, have: usize },

    #[error("cannot train a tree on an empty sample set")]
    EmptySamples,

    #[error("cannot train a forest on an empty dataset")]
    EmptyDataset,

    #[error("record schema does not match model feature names")]
    SchemaMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed cell or row in a data file; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    /// Structural problem in a model file; `line` is 1-based.
    #[error("model format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("unsupported model version: {0}")]
    Version(String),

    /// Wraps an error with the document it came from.
    #[error("document {id}: {source}")]
    Document { id: String, source: Box<Error> },
}
