use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{aggregate_seeded, ConfusionCounts, MetricsError, ScoreSet, SeedAggregate};
use crate::corpus::Register;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegisterScores {
    pub counts: ConfusionCounts,
    pub scores: ScoreSet,
}

/// Scores of one model run (one seed) on one partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunScores {
    pub model: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    pub sentences: usize,
    pub counts: ConfusionCounts,
    pub scores: ScoreSet,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub registers: BTreeMap<Register, RegisterScores>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parse_failure_rate: Option<f64>,
}

/// Metric names carried into aggregates, in report order.
pub fn metric_keys() -> [&'static str; 9] {
    [
        "pos_f1",
        "macro_f1",
        "pos_precision",
        "pos_recall",
        "neg_f1",
        "academic_f1",
        "fiction_f1",
        "news_f1",
        "parse_failure_rate",
    ]
}

impl RunScores {
    pub fn metrics(&self) -> BTreeMap<&'static str, f64> {
        let mut m = BTreeMap::from([
            ("pos_f1", self.scores.pos_f1),
            ("macro_f1", self.scores.macro_f1),
            ("pos_precision", self.scores.pos_precision),
            ("pos_recall", self.scores.pos_recall),
            ("neg_f1", self.scores.neg_f1),
        ]);
        for (register, r) in &self.registers {
            let key = match register {
                Register::Academic => "academic_f1",
                Register::News => "news_f1",
                Register::Fiction => "fiction_f1",
            };
            m.insert(key, r.scores.pos_f1);
        }
        if let Some(rate) = self.parse_failure_rate {
            m.insert("parse_failure_rate", rate);
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelAggregate {
    pub model: String,
    pub seeds: Vec<u64>,
    pub metrics: BTreeMap<String, SeedAggregate>,
}

/// Groups runs by model and aggregates every metric that all of a model's
/// runs report. Models come back sorted by name.
pub fn aggregate_runs(runs: &[RunScores]) -> Result<Vec<ModelAggregate>, MetricsError> {
    let mut by_model: BTreeMap<&str, Vec<&RunScores>> = BTreeMap::new();
    for run in runs {
        by_model.entry(run.model.as_str()).or_default().push(run);
    }
    let mut out = Vec::with_capacity(by_model.len());
    for (model, mut runs) in by_model {
        runs.sort_by_key(|r| r.seed);
        if let Some(w) = runs.windows(2).find(|w| w[0].seed == w[1].seed) {
            return Err(MetricsError::DuplicateSeed {
                model: model.to_string(),
                seed: w[0].seed,
            });
        }
        let per_run: Vec<BTreeMap<&str, f64>> = runs.iter().map(|r| r.metrics()).collect();
        let mut metrics = BTreeMap::new();
        for key in metric_keys() {
            let pairs: Vec<(u64, f64)> = runs
                .iter()
                .zip(&per_run)
                .filter_map(|(r, m)| m.get(key).map(|v| (r.seed, *v)))
                .collect();
            if pairs.is_empty() {
                continue;
            }
            if pairs.len() != runs.len() {
                log::warn!(
                    "model {model}: metric {key} missing from {} of {} runs, not aggregated",
                    runs.len() - pairs.len(),
                    runs.len()
                );
                continue;
            }
            metrics.insert(key.to_string(), aggregate_seeded(&pairs)?);
        }
        out.push(ModelAggregate {
            model: model.to_string(),
            seeds: runs.iter().map(|r| r.seed).collect(),
            metrics,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::score;

    fn run(model: &str, seed: u64, tp: u64) -> RunScores {
        let counts = ConfusionCounts {
            tp,
            fp: 1,
            fn_: 1,
            tn: 10,
        };
        RunScores {
            model: model.into(),
            seed,
            partition: Some("test".into()),
            sentences: 3,
            counts,
            scores: score(&counts),
            registers: BTreeMap::new(),
            parse_failure_rate: None,
        }
    }

    #[test]
    fn groups_by_model() {
        let runs = vec![run("b", 7, 1), run("a", 42, 2), run("a", 7, 3)];
        let aggs = aggregate_runs(&runs).unwrap();
        assert_eq!(aggs.len(), 2);
        assert_eq!(aggs[0].model, "a");
        assert_eq!(aggs[0].seeds, vec![7, 42]);
        let pos = &aggs[0].metrics["pos_f1"];
        assert_eq!(
            pos.values,
            vec![runs[2].scores.pos_f1, runs[1].scores.pos_f1]
        );
        assert!(!aggs[0].metrics.contains_key("academic_f1"));
    }

    #[test]
    fn duplicate_seed_is_an_error() {
        let runs = vec![run("a", 7, 1), run("a", 7, 2)];
        assert!(matches!(
            aggregate_runs(&runs),
            Err(MetricsError::DuplicateSeed { seed: 7, .. })
        ));
    }
}
