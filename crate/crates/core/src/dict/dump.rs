use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::senses::{split_senses, Sense};
use super::xref::{scan_cross_ref, RefScan};

/// One decoded dictionary record, as it appears in the dump file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawEntry {
    pub headword: String,
    #[serde(default, deserialize_with = "null_as_empty")]
    pub gloss: String,
}

fn null_as_empty<'de, D: serde::Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    Ok(Option::<String>::deserialize(d)?.unwrap_or_default())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryFlags {
    pub marker_anomalous: bool,
    pub ref_parse_anomalous: bool,
    /// The first sense redirected to the entry's own headword; the redirect
    /// was dropped.
    pub self_reference: bool,
}

/// A parsed entry: senses segmented and redirects detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictEntry {
    pub headword: String,
    pub senses: Vec<Sense>,
    pub flags: EntryFlags,
}

impl DictEntry {
    pub fn parse(raw: &RawEntry) -> Self {
        let split = split_senses(&raw.gloss);
        let mut flags = EntryFlags {
            marker_anomalous: split.marker_anomalous,
            ..EntryFlags::default()
        };
        let mut senses = split.senses;
        for sense in &mut senses {
            match scan_cross_ref(&sense.text) {
                RefScan::Found(r) if r.target == raw.headword => flags.self_reference = true,
                RefScan::Found(r) => sense.cross_ref = Some(r),
                RefScan::Anomalous => flags.ref_parse_anomalous = true,
                RefScan::Plain => {}
            }
        }
        DictEntry {
            headword: raw.headword.clone(),
            senses,
            flags,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpReport {
    pub accepted: usize,
    pub skipped: usize,
    pub duplicates: usize,
    pub marker_anomalous: usize,
    pub ref_parse_anomalous: usize,
    pub self_references: usize,
}

/// Headword-keyed entry table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntryTable {
    pub entries: BTreeMap<String, DictEntry>,
    pub report: DumpReport,
}

impl EntryTable {
    /// Builds a table from already-decoded records. The first record for a
    /// headword wins; later ones are counted as duplicates. Records with a
    /// blank headword are skipped.
    pub fn from_records<I: IntoIterator<Item = RawEntry>>(records: I) -> Self {
        let mut table = EntryTable::default();
        for mut raw in records {
            table.insert(&mut raw);
        }
        table
    }

    fn insert(&mut self, raw: &mut RawEntry) {
        let trimmed = raw.headword.trim();
        if trimmed.is_empty() {
            self.report.skipped += 1;
            return;
        }
        if trimmed.len() != raw.headword.len() {
            raw.headword = trimmed.to_string();
        }
        if self.entries.contains_key(&raw.headword) {
            self.report.duplicates += 1;
            log::debug!("duplicate headword {:?} ignored", raw.headword);
            return;
        }
        let entry = DictEntry::parse(raw);
        self.report.accepted += 1;
        self.report.marker_anomalous += usize::from(entry.flags.marker_anomalous);
        self.report.ref_parse_anomalous += usize::from(entry.flags.ref_parse_anomalous);
        self.report.self_references += usize::from(entry.flags.self_reference);
        self.entries.insert(raw.headword.clone(), entry);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, headword: &str) -> Option<&DictEntry> {
        self.entries.get(headword)
    }
}

/// Reads a line-delimited `{"headword": .., "gloss": ..}` dump.
///
/// Lines that are not valid records are skipped and counted; only I/O
/// failures abort the read.
pub fn parse_dump<R: BufRead>(reader: R) -> std::io::Result<EntryTable> {
    let mut table = EntryTable::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RawEntry>(&line) {
            Ok(mut raw) => table.insert(&mut raw),
            Err(e) => {
                log::debug!("dump line {}: {e}", idx + 1);
                table.report.skipped += 1;
            }
        }
    }
    if table.report.accepted == 0 && table.report.skipped == 0 {
        log::warn!("dictionary dump is empty");
    }
    if table.report.duplicates > 0 {
        log::warn!(
            "{} duplicate headwords ignored (first occurrence kept)",
            table.report.duplicates
        );
    }
    Ok(table)
}

pub fn load_dump(path: &Path) -> crate::Result<EntryTable> {
    let reader = crate::io::open(path)?;
    parse_dump(reader).map_err(|e| crate::Error::io(path, e))
}
