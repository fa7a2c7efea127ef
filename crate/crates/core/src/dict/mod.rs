//! Basic-meaning lexicon construction from a decoded dictionary dump.
//!
//! The pipeline is: [`parse_dump`] reads `{headword, gloss}` records and
//! segments each gloss into numbered senses, [`resolve_references`] follows
//! `见` / `同` / `参看` redirects to a bounded depth, and the resulting
//! [`ResolvedTable`] feeds [`compute_dict_stats`], [`compute_coverage`] and
//! the embedding worklist.

mod coverage;
mod dump;
mod resolve;
mod senses;
mod stats;
mod xref;

use thiserror::Error;

pub use coverage::{compute_coverage, CoverageReport};
pub use dump::{load_dump, parse_dump, DictEntry, DumpReport, EntryFlags, EntryTable, RawEntry};
pub use resolve::{
    resolve_references, EntrySummary, MeaningSource, Resolution, ResolutionReport, ResolvedEntry,
    ResolvedRecord, ResolvedTable, MAX_REFERENCE_DEPTH,
};
pub use senses::{select_basic_meaning, split_senses, Sense, SenseSplit};
pub use stats::{compute_dict_stats, render_rows, DictStats, StatsRow};
pub use xref::{detect_cross_ref, scan_cross_ref, CrossRef, RefIndicator, RefScan};

#[derive(Debug, Error)]
pub enum DictError {
    #[error("coverage is undefined for an empty vocabulary")]
    EmptyVocabulary,
}
