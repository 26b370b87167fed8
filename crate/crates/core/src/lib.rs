//! Pairwise authorship verification for English and Romanized Sinhala text.
//!
//! The pipeline: clean and tokenize raw text, extract a stylometric profile
//! per text (or per chunk for Romanized Sinhala), reduce each text pair to a
//! fixed-order similarity record, and score same-author likelihood with a
//! seeded random-forest regressor trained on labeled pairs. Every stage is a
//! pure function of its inputs and the seed, so dataset files, model files,
//! and reports are byte-identical across runs and thread counts.

pub mod dataset;
pub mod english;
pub mod error;
pub mod eval;
pub mod forest;
pub mod pairwise;
pub mod rng;
pub mod romanized;
pub mod synth;
pub mod text;

pub use dataset::{Corpus, CorpusDoc, PairDataset, VarianceReport, DEFAULT_VARIANCE_THRESHOLD};
pub use english::{EnglishProfile, PosTag, TransitionGraph};
pub use error::{Error, Result};
pub use eval::{ClassificationReport, ConfusionMatrix};
pub use forest::{DecisionTree, Forest, ForestParams};
pub use pairwise::{SimilarityRecord, StyleProfile};
pub use romanized::{RsLexicon, RsPairFeatures, WordLanguage};
pub use synth::AuthorStyleParams;
pub use text::{Chunk, CleanPolicy, LanguageMode, RawDocument, Token, TokenKind};
