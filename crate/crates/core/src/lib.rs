//! Toolkit for token-level metaphor identification experiments on Chinese
//! MIPVU-annotated text.
//!
//! The crate covers the data side of the experimental pipeline:
//!
//! - [`dict`]: builds a basic-meaning lexicon from a decoded dictionary dump
//!   (sense segmentation, first-sense selection, cross-reference resolution,
//!   statistics and corpus coverage).
//! - [`store`]: the binary embedding matrix and headword index consumed at
//!   model input, with the zero-vector OOV fallback.
//! - [`corpus`]: the annotated corpus, its statistics, and the reproducible
//!   document-level split.
//! - [`adapters`]: decoders turning raw model outputs (probabilities,
//!   generated JSON, BIO tags) into per-token binary labels.
//! - [`metrics`]: confusion counts, class scores, per-register breakdowns,
//!   multi-seed aggregation and table rendering.
//! - [`config`]: the `key = value` run configuration.

pub mod adapters;
pub mod config;
pub mod corpus;
pub mod dict;
pub mod display;
mod error;
pub mod io;
pub mod metrics;
pub mod store;

pub use error::{Error, Result};

/// Version of the on-disk formats written and read by this crate.
pub const FORMAT_VERSION: u32 = 1;
