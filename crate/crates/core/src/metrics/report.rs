//! Result tables.
//!
//! Cells read `mean ± std` with four decimals, rounded half-up on the
//! decimal value. The JSON aggregate files remain the full-precision record.

use std::str::FromStr;

use super::{ModelAggregate, SeedAggregate};
use crate::display::fixed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!(
                "unknown report format {other:?} (expected md or csv)"
            )),
        }
    }
}

/// Which columns a report shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Overall scores plus per-register positive F1.
    Main,
    /// Positive and macro F1 only.
    Ablation,
    /// One row per task formulation, best first, with parse failure rate.
    TaskForm,
}

impl FromStr for Layout {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "main" => Ok(Layout::Main),
            "ablation" => Ok(Layout::Ablation),
            "taskform" => Ok(Layout::TaskForm),
            other => Err(format!(
                "unknown layout {other:?} (expected main, ablation or taskform)"
            )),
        }
    }
}

impl Layout {
    fn columns(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Layout::Main => &[
                ("Test pos-F1", "pos_f1"),
                ("Macro F1", "macro_f1"),
                ("Precision", "pos_precision"),
                ("Recall", "pos_recall"),
                ("Academic F1", "academic_f1"),
                ("Fiction F1", "fiction_f1"),
                ("News F1", "news_f1"),
            ],
            Layout::Ablation => &[("Test pos-F1", "pos_f1"), ("Macro F1", "macro_f1")],
            Layout::TaskForm => &[
                ("Test pos-F1", "pos_f1"),
                ("Parse failure rate", "parse_failure_rate"),
            ],
        }
    }

    fn first_header(self) -> &'static str {
        match self {
            Layout::Main => "Model",
            Layout::Ablation => "Config",
            Layout::TaskForm => "Task Form",
        }
    }
}

/// `0.7142 ± 0.0121`
pub fn cell(agg: &SeedAggregate) -> String {
    format!("{} ± {}", fixed(agg.mean, 4), fixed(agg.std, 4))
}

fn cell_for(layout: Layout, agg: &SeedAggregate) -> String {
    if layout == Layout::TaskForm && agg.values.len() == 1 {
        fixed(agg.mean, 4)
    } else {
        cell(agg)
    }
}

const GAP: &str = "-";

pub fn emit_report(models: &[ModelAggregate], layout: Layout, format: ReportFormat) -> String {
    let columns = layout.columns();
    let mut rows: Vec<&ModelAggregate> = models
        .iter()
        .filter(|m| {
            let keep = columns.iter().any(|(_, key)| m.metrics.contains_key(*key));
            if !keep {
                log::warn!("model {:?} has no reportable metrics; row omitted", m.model);
            }
            keep
        })
        .collect();
    if layout == Layout::TaskForm {
        let f1 = |m: &ModelAggregate| {
            m.metrics
                .get("pos_f1")
                .map_or(f64::NEG_INFINITY, |a| a.mean)
        };
        rows.sort_by(|a, b| f1(b).total_cmp(&f1(a)));
    }

    let header: Vec<&str> = std::iter::once(layout.first_header())
        .chain(columns.iter().map(|(h, _)| *h))
        .collect();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|m| {
            std::iter::once(m.model.clone())
                .chain(columns.iter().map(|(_, key)| {
                    m.metrics
                        .get(*key)
                        .map_or_else(|| GAP.to_string(), |a| cell_for(layout, a))
                }))
                .collect()
        })
        .collect();

    match format {
        ReportFormat::Markdown => {
            let mut s = format!("| {} |\n", header.join(" | "));
            s.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            for row in body {
                s.push_str(&format!("| {} |\n", row.join(" | ")));
            }
            s
        }
        ReportFormat::Csv => {
            let mut s = header
                .iter()
                .map(|h| csv_field(h))
                .collect::<Vec<_>>()
                .join(",");
            s.push('\n');
            for row in body {
                s.push_str(
                    &row.iter()
                        .map(|f| csv_field(f))
                        .collect::<Vec<_>>()
                        .join(","),
                );
                s.push('\n');
            }
            s
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
