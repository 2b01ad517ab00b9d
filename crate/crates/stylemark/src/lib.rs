//! Stylometry toolkit for parallel human/machine literary translations.
//!
//! The pipeline runs corpus ingestion, machine-translation generation,
//! feature extraction, group statistics, and authorship attribution:
//!
//! - [`corpus`] — bilingual novel ingestion, byte-budgeted chunking,
//!   variant alignment, and a versioned line-record persistence format.
//! - [`textproc`] — deterministic tokenizer, sentence splitter,
//!   sentence-type classifier, POS tagger, and lexicon loading.
//! - [`features`] — lexical, syntactic, and content feature extraction
//!   per translation document.
//! - [`stats`] — one-way ANOVA with Tukey HSD pairwise comparison and
//!   the special functions behind the p-values.
//! - [`attribution`] — most-frequent-feature bases, Burrows' Delta
//!   z-score profiles, a logistic-regression classifier, and the
//!   100–1000 MFW accuracy sweep.
//! - [`mt_client`] — prompt rendering and a resumable chat-completion
//!   driver for sentence-to-sentence and context-based translation.
//! - [`synthetic`] — deterministic synthetic corpora for benchmarks and
//!   classifier sanity checks.

pub mod attribution;
pub mod corpus;
pub mod features;
pub mod mt_client;
pub mod stats;
pub mod synthetic;
pub mod textproc;

pub use corpus::{Book, Corpus, Genre, ParallelChunk, TranslationDoc, VariantId};
pub use features::{ContentCategory, ContentCounts, DocId, FeatureVector};

/// Version string embedded in file headers.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
