//! Smishing (SMS phishing) detection library.
//!
//! Two-phase design: a deterministic text preprocessing/normalization
//! pipeline ([`pipeline`]) feeding a document-frequency naive Bayes
//! classifier ([`bayes`]), plus corpus ingestion and model persistence
//! ([`corpus`]) and train/test evaluation tooling ([`eval`]).

pub mod bayes;
pub mod corpus;
pub mod eval;
pub mod pipeline;

pub use bayes::{
    ClassLabel, ClassificationResult, PriorMode, SmoothingConfig, SmoothingMode, TrainedModel,
};
pub use corpus::{Corpus, LabeledMessage, MessageLabel};
pub use eval::{ConfusionMatrix, CorpusStats, Metrics, SplitConfig};
pub use pipeline::{PipelineSettings, SlangDictionary, StopWordList};
