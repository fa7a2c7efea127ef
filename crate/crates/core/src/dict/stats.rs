use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::coverage::CoverageReport;
use super::resolve::{EntrySummary, MeaningSource, Resolution};
use crate::display::{fixed, percent};
use crate::store::EMBEDDING_DIM;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DictStats {
    pub total_entries: usize,
    /// Share of entries whose basic meaning is not the headword fallback.
    pub parseable_fraction: f64,
    /// Sense count → number of entries. Entries without a parseable sense
    /// sit in bucket 0.
    pub polysemy_histogram: BTreeMap<usize, usize>,
    pub multi_sense_fraction: f64,
    pub mean_senses: f64,
    pub max_senses: usize,
    pub referencing_entries: usize,
    pub resolved_count: usize,
    pub missing_target_count: usize,
    pub cycle_count: usize,
    pub depth_exceeded_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRow {
    pub item: String,
    pub value: String,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn compute_dict_stats<'a, E, I>(entries: I) -> DictStats
where
    E: EntrySummary + 'a,
    I: IntoIterator<Item = &'a E>,
{
    let mut stats = DictStats::default();
    let mut extracted = 0usize;
    let mut multi = 0usize;
    let mut sense_total = 0usize;
    for e in entries {
        stats.total_entries += 1;
        let n = e.sense_count();
        *stats.polysemy_histogram.entry(n).or_insert(0) += 1;
        sense_total += n;
        stats.max_senses = stats.max_senses.max(n);
        multi += usize::from(n >= 2);
        extracted += usize::from(e.meaning_source() != MeaningSource::HeadwordFallback);
        match e.resolution() {
            Resolution::NoneNeeded => {}
            Resolution::Resolved { .. } => stats.resolved_count += 1,
            Resolution::FailedMissingTarget => stats.missing_target_count += 1,
            Resolution::FailedCycle => stats.cycle_count += 1,
            Resolution::FailedDepth => stats.depth_exceeded_count += 1,
        }
        stats.referencing_entries += usize::from(e.resolution().is_referencing());
    }
    stats.parseable_fraction = ratio(extracted, stats.total_entries);
    stats.multi_sense_fraction = ratio(multi, stats.total_entries);
    stats.mean_senses = ratio(sense_total, stats.total_entries);
    stats
}

impl DictStats {
    /// Entries with at most one sense; fallback entries count as single-sense
    /// since they carry exactly one basic meaning.
    pub fn single_sense(&self) -> usize {
        self.polysemy_histogram.range(..=1).map(|(_, c)| c).sum()
    }

    pub fn two_sense(&self) -> usize {
        self.polysemy_histogram.get(&2).copied().unwrap_or(0)
    }

    pub fn three_plus_sense(&self) -> usize {
        self.polysemy_histogram.range(3..).map(|(_, c)| c).sum()
    }

    /// Summary rows in the layout of the published lexicon table.
    pub fn rows(&self, coverage: Option<&CoverageReport>) -> Vec<StatsRow> {
        let row = |item: &str, value: String| StatsRow {
            item: item.to_string(),
            value,
        };
        let mut rows = vec![
            row("Total entries", self.total_entries.to_string()),
            row(
                "Dictionary entries with basic meaning extracted",
                format!("{}%", percent(self.parseable_fraction, 2)),
            ),
        ];
        if let Some(c) = coverage {
            rows.push(row(
                "Corpus vocab covered by dictionary",
                format!("{}%", percent(c.coverage_fraction, 2)),
            ));
        }
        rows.extend([
            row("Embedding dim", EMBEDDING_DIM.to_string()),
            row("Polysemy: single-sense", self.single_sense().to_string()),
            row("Polysemy: 2-sense", self.two_sense().to_string()),
            row("Polysemy: 3+-sense", self.three_plus_sense().to_string()),
            row(
                "Multi-sense entries (%)",
                format!("{}%", percent(self.multi_sense_fraction, 2)),
            ),
            row("Mean senses per entry", fixed(self.mean_senses, 2)),
            row("Max senses (single entry)", self.max_senses.to_string()),
            row("Referencing entries", self.referencing_entries.to_string()),
            row("References resolved", self.resolved_count.to_string()),
            row(
                "References with missing target",
                self.missing_target_count.to_string(),
            ),
            row("References in cycles", self.cycle_count.to_string()),
            row(
                "References over depth limit",
                self.depth_exceeded_count.to_string(),
            ),
        ]);
        rows
    }
}

/// Renders rows as a two-column markdown table.
pub fn render_rows(rows: &[StatsRow]) -> String {
    let mut s = String::from("| Item | Value |\n|---|---|\n");
    for r in rows {
        s.push_str(&format!("| {} | {} |\n", r.item, r.value));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dict::ResolvedRecord;

    fn rec(n: usize, source: MeaningSource, resolution: Resolution) -> ResolvedRecord {
        ResolvedRecord {
            headword: format!("h{n}"),
            basic_meaning: "x".into(),
            meaning_source: source,
            resolution,
            sense_count: n,
        }
    }

    #[test]
    fn hand_computed_small_table() {
        let recs = vec![
            rec(1, MeaningSource::FirstSense, Resolution::NoneNeeded),
            rec(1, MeaningSource::FirstSense, Resolution::NoneNeeded),
            rec(2, MeaningSource::FirstSense, Resolution::NoneNeeded),
        ];
        let s = compute_dict_stats(&recs);
        assert_eq!(s.polysemy_histogram, BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(s.multi_sense_fraction, 1.0 / 3.0);
        assert_eq!(s.mean_senses, 4.0 / 3.0);
        assert_eq!(s.max_senses, 2);
        assert_eq!(s.parseable_fraction, 1.0);
    }

    #[test]
    fn empty_table_is_all_zero() {
        let s = compute_dict_stats::<ResolvedRecord, _>(&[]);
        assert_eq!(s, DictStats::default());
    }

    #[test]
    fn resolution_buckets_and_rows() {
        let recs = vec![
            rec(0, MeaningSource::HeadwordFallback, Resolution::NoneNeeded),
            rec(
                1,
                MeaningSource::ResolvedReference,
                Resolution::Resolved { depth: 1 },
            ),
            rec(
                1,
                MeaningSource::FirstSense,
                Resolution::FailedMissingTarget,
            ),
            rec(1, MeaningSource::FirstSense, Resolution::FailedCycle),
            rec(4, MeaningSource::FirstSense, Resolution::FailedDepth),
        ];
        let s = compute_dict_stats(&recs);
        assert_eq!(s.referencing_entries, 4);
        assert_eq!(
            (
                s.resolved_count,
                s.missing_target_count,
                s.cycle_count,
                s.depth_exceeded_count
            ),
            (1, 1, 1, 1)
        );
        assert_eq!(s.parseable_fraction, 0.8);
        assert_eq!(s.single_sense(), 4);
        assert_eq!(s.three_plus_sense(), 1);
        let rows = s.rows(None);
        assert_eq!(rows[1].value, "80.00%");
        assert!(rows
            .iter()
            .any(|r| r.item == "Mean senses per entry" && r.value == "1.40"));
    }
}
