//! Corpus ingestion, pipeline orchestration, assertion storage and graph export.

pub mod config;
pub mod corpus;
pub mod dot;
pub mod pipeline;
pub mod store;

pub use config::PipelineConfig;
pub use corpus::{ingest_corpus, parse_corpus, Corpus, Document};
pub use dot::emit_dot;
pub use pipeline::{run_pipeline, DocumentAnalysis, Pipeline, RunOutput, SentenceAnalysis};
pub use store::AssertionStore;
