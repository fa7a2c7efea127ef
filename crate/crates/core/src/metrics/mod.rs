//! Token-level evaluation.
//!
//! Scores follow the usual conventions for imbalanced binary labelling:
//! the metaphor class is "positive", undefined ratios (0/0) are 0, and macro
//! F1 is the unweighted mean of the two class F1 scores.

mod aggregate;
mod register;
mod report;
mod run;

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adapters::TokenLabels;

pub use aggregate::{aggregate_seeded, aggregate_seeds, SeedAggregate};
pub use register::{per_register, RegisterBreakdown};
pub use report::{cell, emit_report, Layout, ReportFormat};
pub use run::{aggregate_runs, metric_keys, ModelAggregate, RegisterScores, RunScores};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("no prediction for sentence {0:?}")]
    MissingSentence(String),
    #[error("prediction for sentence {0:?} which is not in the gold set")]
    UnexpectedSentence(String),
    #[error("sentence {0:?} appears more than once")]
    DuplicateSentence(String),
    #[error("sentence {sent_id:?}: gold has {gold} tokens, prediction has {pred}")]
    LengthMismatch {
        sent_id: String,
        gold: usize,
        pred: usize,
    },
    #[error("cannot aggregate an empty value list")]
    NoValues,
    #[error("non-finite value {0} in aggregation")]
    NonFinite(f64),
    #[error("model {model:?} has more than one run for seed {seed}")]
    DuplicateSeed { model: String, seed: u64 },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn add(&mut self, gold: bool, pred: bool) {
        match (gold, pred) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (true, false) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn merge(&mut self, other: &ConfusionCounts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.tn += other.tn;
    }

    /// Counts with the roles of the two classes exchanged.
    pub fn swapped(&self) -> ConfusionCounts {
        ConfusionCounts {
            tp: self.tn,
            fp: self.fn_,
            fn_: self.fp,
            tn: self.tp,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreSet {
    pub pos_precision: f64,
    pub pos_recall: f64,
    pub pos_f1: f64,
    pub neg_f1: f64,
    pub macro_f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall, from counts: `2·hit / (2·hit + miss_a + miss_b)`.
/// Same value as `2PR/(P+R)` with a single rounding step.
fn f1(hit: u64, miss_a: u64, miss_b: u64) -> f64 {
    ratio(2 * hit, 2 * hit + miss_a + miss_b)
}

pub fn score(c: &ConfusionCounts) -> ScoreSet {
    let pos_precision = ratio(c.tp, c.tp + c.fp);
    let pos_recall = ratio(c.tp, c.tp + c.fn_);
    let pos_f1 = f1(c.tp, c.fp, c.fn_);
    let neg_f1 = f1(c.tn, c.fn_, c.fp);
    ScoreSet {
        pos_precision,
        pos_recall,
        pos_f1,
        neg_f1,
        macro_f1: (pos_f1 + neg_f1) / 2.0,
    }
}

/// Matches predictions to gold by sentence id and checks lengths.
pub(crate) fn pair_up<'a>(
    gold: impl IntoIterator<Item = &'a TokenLabels>,
    pred: &'a [TokenLabels],
) -> Result<Vec<(&'a TokenLabels, &'a TokenLabels)>, MetricsError> {
    let mut by_id: HashMap<&str, &TokenLabels> = HashMap::with_capacity(pred.len());
    for p in pred {
        if by_id.insert(p.sent_id.as_str(), p).is_some() {
            return Err(MetricsError::DuplicateSentence(p.sent_id.clone()));
        }
    }
    let mut used = HashSet::with_capacity(pred.len());
    let mut pairs = Vec::new();
    for g in gold {
        if !used.insert(g.sent_id.as_str()) {
            return Err(MetricsError::DuplicateSentence(g.sent_id.clone()));
        }
        let p = by_id
            .get(g.sent_id.as_str())
            .ok_or_else(|| MetricsError::MissingSentence(g.sent_id.clone()))?;
        if p.labels.len() != g.labels.len() {
            return Err(MetricsError::LengthMismatch {
                sent_id: g.sent_id.clone(),
                gold: g.labels.len(),
                pred: p.labels.len(),
            });
        }
        pairs.push((g, *p));
    }
    if let Some(extra) = pred.iter().find(|p| !used.contains(p.sent_id.as_str())) {
        return Err(MetricsError::UnexpectedSentence(extra.sent_id.clone()));
    }
    Ok(pairs)
}

pub fn confusion(
    gold: &[TokenLabels],
    pred: &[TokenLabels],
) -> Result<ConfusionCounts, MetricsError> {
    let mut counts = ConfusionCounts::default();
    for (g, p) in pair_up(gold, pred)? {
        for (&gl, &pl) in g.labels.iter().zip(&p.labels) {
            counts.add(gl, pl);
        }
    }
    Ok(counts)
}
