//! Shallow parsing of abstracts into subject-verb-object assertions, and
//! mining of entity interaction networks from those assertions.

pub mod chunker;
pub mod error;
pub mod evaluation;
pub mod harness;
pub mod miner;
pub mod normalizer;
pub mod sentencer;
pub mod stemmer;
pub mod svo;
pub mod tagger;
pub mod tags;

pub use error::{Error, Result};
