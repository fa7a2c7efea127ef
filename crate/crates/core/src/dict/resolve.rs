use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dump::{DictEntry, EntryTable};
use super::senses::{select_basic_meaning, Sense};
use super::xref::CrossRef;

/// Redirect chains longer than this many hops are abandoned.
pub const MAX_REFERENCE_DEPTH: u8 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeaningSource {
    FirstSense,
    HeadwordFallback,
    ResolvedReference,
}

/// How an entry's redirect (if any) was handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Resolution {
    NoneNeeded,
    /// Reached a non-redirecting entry after `depth` hops.
    Resolved {
        depth: u8,
    },
    FailedMissingTarget,
    FailedCycle,
    FailedDepth,
}

impl Resolution {
    pub fn is_referencing(self) -> bool {
        !matches!(self, Resolution::NoneNeeded)
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::NoneNeeded => f.write_str("none-needed"),
            Resolution::Resolved { depth } => write!(f, "resolved:{depth}"),
            Resolution::FailedMissingTarget => f.write_str("failed-missing-target"),
            Resolution::FailedCycle => f.write_str("failed-cycle"),
            Resolution::FailedDepth => f.write_str("failed-depth"),
        }
    }
}

impl FromStr for Resolution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none-needed" => Ok(Resolution::NoneNeeded),
            "failed-missing-target" => Ok(Resolution::FailedMissingTarget),
            "failed-cycle" => Ok(Resolution::FailedCycle),
            "failed-depth" => Ok(Resolution::FailedDepth),
            other => other
                .strip_prefix("resolved:")
                .and_then(|d| d.parse::<u8>().ok())
                .filter(|d| *d <= MAX_REFERENCE_DEPTH)
                .map(|depth| Resolution::Resolved { depth })
                .ok_or_else(|| format!("unknown resolution {other:?}")),
        }
    }
}

impl Serialize for Resolution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Resolution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedEntry {
    pub headword: String,
    pub senses: Vec<Sense>,
    pub basic_meaning: String,
    pub meaning_source: MeaningSource,
    pub resolution: Resolution,
}

impl ResolvedEntry {
    pub fn record(&self) -> ResolvedRecord {
        ResolvedRecord {
            headword: self.headword.clone(),
            basic_meaning: self.basic_meaning.clone(),
            meaning_source: self.meaning_source,
            resolution: self.resolution,
            sense_count: self.senses.len(),
        }
    }
}

/// One line of the resolved-entry output file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedRecord {
    pub headword: String,
    pub basic_meaning: String,
    pub meaning_source: MeaningSource,
    pub resolution: Resolution,
    pub sense_count: usize,
}

/// The per-entry facts statistics are computed from; implemented by both
/// the in-memory entries and the records read back from disk.
pub trait EntrySummary {
    fn sense_count(&self) -> usize;
    fn meaning_source(&self) -> MeaningSource;
    fn resolution(&self) -> Resolution;
}

impl EntrySummary for ResolvedEntry {
    fn sense_count(&self) -> usize {
        self.senses.len()
    }
    fn meaning_source(&self) -> MeaningSource {
        self.meaning_source
    }
    fn resolution(&self) -> Resolution {
        self.resolution
    }
}

impl EntrySummary for ResolvedRecord {
    fn sense_count(&self) -> usize {
        self.sense_count
    }
    fn meaning_source(&self) -> MeaningSource {
        self.meaning_source
    }
    fn resolution(&self) -> Resolution {
        self.resolution
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolvedTable {
    pub entries: BTreeMap<String, ResolvedEntry>,
}

impl ResolvedTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, headword: &str) -> Option<&ResolvedEntry> {
        self.entries.get(headword)
    }

    pub fn values(&self) -> impl Iterator<Item = &ResolvedEntry> {
        self.entries.values()
    }

    pub fn headwords(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Records sorted by headword.
    pub fn records(&self) -> Vec<ResolvedRecord> {
        self.entries.values().map(ResolvedEntry::record).collect()
    }

    /// Recovers the parsed entries the table was resolved from.
    pub fn to_entry_table(&self) -> EntryTable {
        let mut table = EntryTable::default();
        for e in self.entries.values() {
            table.entries.insert(
                e.headword.clone(),
                DictEntry {
                    headword: e.headword.clone(),
                    senses: e.senses.clone(),
                    flags: Default::default(),
                },
            );
        }
        table.report.accepted = table.entries.len();
        table
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub none_needed: usize,
    pub resolved: usize,
    pub failed_missing_target: usize,
    pub failed_cycle: usize,
    pub failed_depth: usize,
}

impl ResolutionReport {
    pub fn referencing(&self) -> usize {
        self.resolved + self.failed_missing_target + self.failed_cycle + self.failed_depth
    }

    fn count(&mut self, r: Resolution) {
        match r {
            Resolution::NoneNeeded => self.none_needed += 1,
            Resolution::Resolved { .. } => self.resolved += 1,
            Resolution::FailedMissingTarget => self.failed_missing_target += 1,
            Resolution::FailedCycle => self.failed_cycle += 1,
            Resolution::FailedDepth => self.failed_depth += 1,
        }
    }
}

/// The redirect carried by an entry's basic-meaning sense.
fn primary_ref(entry: &DictEntry) -> Option<&CrossRef> {
    entry.senses.first().and_then(|s| s.cross_ref.as_ref())
}

fn resolve_entry(table: &EntryTable, entry: &DictEntry) -> ResolvedEntry {
    let (own_meaning, own_source) = select_basic_meaning(&entry.headword, &entry.senses);
    let finish = |basic_meaning, meaning_source, resolution| ResolvedEntry {
        headword: entry.headword.clone(),
        senses: entry.senses.clone(),
        basic_meaning,
        meaning_source,
        resolution,
    };

    let Some(mut next) = primary_ref(entry) else {
        return finish(own_meaning, own_source, Resolution::NoneNeeded);
    };

    // At most MAX_REFERENCE_DEPTH + 1 headwords are ever on the path.
    let mut path: Vec<&str> = vec![&entry.headword];
    let failure = loop {
        let Some(target) = table.get(&next.target) else {
            break Resolution::FailedMissingTarget;
        };
        if path.contains(&target.headword.as_str()) {
            break Resolution::FailedCycle;
        }
        path.push(&target.headword);
        let depth = (path.len() - 1) as u8;
        match primary_ref(target) {
            None => {
                let (meaning, _) = select_basic_meaning(&target.headword, &target.senses);
                return finish(
                    meaning,
                    MeaningSource::ResolvedReference,
                    Resolution::Resolved { depth },
                );
            }
            Some(_) if depth >= MAX_REFERENCE_DEPTH => break Resolution::FailedDepth,
            Some(r) => next = r,
        }
    };
    // Unresolvable redirects keep their own first-sense text.
    finish(own_meaning, own_source, failure)
}

/// Resolves every entry's redirect chain against the frozen table.
///
/// Entries are independent given the table, so they are processed in
/// parallel; output order is the table's headword order regardless.
pub fn resolve_references(table: &EntryTable) -> (ResolvedTable, ResolutionReport) {
    let entries: Vec<&DictEntry> = table.entries.values().collect();
    let resolved: Vec<ResolvedEntry> = entries
        .par_iter()
        .map(|e| resolve_entry(table, e))
        .collect();

    let mut report = ResolutionReport::default();
    let mut out = ResolvedTable::default();
    for entry in resolved {
        report.count(entry.resolution);
        out.entries.insert(entry.headword.clone(), entry);
    }
    (out, report)
}
