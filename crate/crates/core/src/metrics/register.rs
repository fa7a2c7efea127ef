use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{pair_up, score, ConfusionCounts, MetricsError, ScoreSet};
use crate::adapters::TokenLabels;
use crate::corpus::{Corpus, Register};

/// Scores computed separately on each register's tokens. Registers with no
/// sentences in the evaluated corpus are absent.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RegisterBreakdown {
    pub counts: BTreeMap<Register, ConfusionCounts>,
    pub scores: BTreeMap<Register, ScoreSet>,
}

pub fn per_register(
    gold: &Corpus,
    pred: &[TokenLabels],
) -> Result<RegisterBreakdown, MetricsError> {
    let gold_labels: Vec<(Register, TokenLabels)> = gold
        .sentences()
        .map(|(doc, s)| (doc.register, s.gold()))
        .collect();
    let pairs = pair_up(gold_labels.iter().map(|(_, l)| l), pred)?;

    let mut counts: BTreeMap<Register, ConfusionCounts> = BTreeMap::new();
    for ((register, _), (g, p)) in gold_labels.iter().zip(pairs) {
        let c = counts.entry(*register).or_default();
        for (&gl, &pl) in g.labels.iter().zip(&p.labels) {
            c.add(gl, pl);
        }
    }
    let scores = counts.iter().map(|(r, c)| (*r, score(c))).collect();
    Ok(RegisterBreakdown { counts, scores })
}
