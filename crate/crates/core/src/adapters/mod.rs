//! Decoders from raw model outputs to per-token binary labels.
//!
//! Three output shapes are supported: per-token probabilities from a
//! classification head, free text containing a JSON array from a generative
//! model, and BIO tag sequences.

mod bio;
mod generative;
mod preds;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bio::{decode_bio, BioDecode, BioTag};
pub use generative::{parse_generative, parse_generative_bytes, AlignCounts};
pub use preds::{decode_predictions, LabelRecord, PredictionKind, PredictionRecord};

pub const DEFAULT_TAU: f64 = 0.5;

/// Binary metaphor decisions for one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenLabels {
    pub sent_id: String,
    #[serde(with = "bits")]
    pub labels: Vec<bool>,
}

/// Labels are written as 0/1 integers.
pub(crate) mod bits {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(labels: &[bool], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(labels.iter().map(|&b| u8::from(b)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<bool>, D::Error> {
        Vec::<u8>::deserialize(d)?
            .into_iter()
            .map(|v| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(serde::de::Error::custom(format!(
                    "label {other} is not 0 or 1"
                ))),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParseStatus {
    Ok,
    ParseFailure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseOutcome {
    pub status: ParseStatus,
    pub detail: String,
}

impl ParseOutcome {
    pub fn ok(detail: impl Into<String>) -> Self {
        ParseOutcome {
            status: ParseStatus::Ok,
            detail: detail.into(),
        }
    }

    pub fn failure(detail: impl Into<String>) -> Self {
        ParseOutcome {
            status: ParseStatus::ParseFailure,
            detail: detail.into(),
        }
    }

    pub fn is_failure(&self) -> bool {
        self.status == ParseStatus::ParseFailure
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum AdapterError {
    #[error("probability {value} at position {index} is outside [0, 1]")]
    ProbabilityOutOfRange { index: usize, value: f64 },
    #[error("threshold must be a number, got {0}")]
    InvalidThreshold(f64),
    #[error("unknown tag {tag:?} at position {index}")]
    UnknownTag { index: usize, tag: String },
    #[error("sentence {sent_id:?}: payload has {found} items for {expected} tokens")]
    LengthMismatch {
        sent_id: String,
        expected: usize,
        found: usize,
    },
    #[error("sentence {sent_id:?}: malformed {kind} payload: {message}")]
    Payload {
        sent_id: String,
        kind: &'static str,
        message: String,
    },
    #[error("prediction for unknown sentence {0:?}")]
    UnknownSentence(String),
    #[error("more than one prediction for sentence {0:?}")]
    DuplicateSentence(String),
    #[error("failure rate over an empty outcome list")]
    NoOutcomes,
}

/// `prob ≥ tau` → positive.
pub fn threshold_probs(probs: &[f64], tau: f64) -> Result<Vec<bool>, AdapterError> {
    if tau.is_nan() {
        return Err(AdapterError::InvalidThreshold(tau));
    }
    probs
        .iter()
        .enumerate()
        .map(|(index, &p)| {
            if (0.0..=1.0).contains(&p) {
                Ok(p >= tau)
            } else {
                Err(AdapterError::ProbabilityOutOfRange { index, value: p })
            }
        })
        .collect()
}

/// Share of outcomes that are parse failures.
pub fn failure_rate(outcomes: &[ParseOutcome]) -> Result<f64, AdapterError> {
    if outcomes.is_empty() {
        return Err(AdapterError::NoOutcomes);
    }
    let failures = outcomes.iter().filter(|o| o.is_failure()).count();
    Ok(failures as f64 / outcomes.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_examples() {
        assert_eq!(
            threshold_probs(&[0.9, 0.1], 0.5).unwrap(),
            vec![true, false]
        );
        assert_eq!(threshold_probs(&[0.5], 0.5).unwrap(), vec![true]);
        assert_eq!(
            threshold_probs(&[0.2, 1.5], 0.5),
            Err(AdapterError::ProbabilityOutOfRange {
                index: 1,
                value: 1.5
            })
        );
        assert!(threshold_probs(&[f64::NAN], 0.5).is_err());
        assert!(threshold_probs(&[0.3], f64::NAN).is_err());
    }

    #[test]
    fn threshold_extremes() {
        let probs = [0.0, 0.3, 1.0];
        assert!(threshold_probs(&probs, 0.0).unwrap().iter().all(|&b| b));
        let above_one = f64::from_bits(1.0f64.to_bits() + 1);
        assert!(threshold_probs(&probs, above_one)
            .unwrap()
            .iter()
            .all(|&b| !b));
    }

    #[test]
    fn failure_rates() {
        let ok = ParseOutcome::ok("");
        let bad = ParseOutcome::failure("");
        assert_eq!(
            failure_rate(&[ok.clone(), ok.clone(), bad.clone(), ok.clone()]).unwrap(),
            0.25
        );
        assert_eq!(failure_rate(&[ok.clone(), ok]).unwrap(), 0.0);
        assert_eq!(failure_rate(&[bad.clone(), bad]).unwrap(), 1.0);
        assert_eq!(failure_rate(&[]), Err(AdapterError::NoOutcomes));
    }

    #[test]
    fn labels_serialize_as_bits() {
        let labels = TokenLabels {
            sent_id: "s".into(),
            labels: vec![true, false],
        };
        let json = serde_json::to_string(&labels).unwrap();
        assert_eq!(json, r#"{"sent_id":"s","labels":[1,0]}"#);
        assert_eq!(serde_json::from_str::<TokenLabels>(&json).unwrap(), labels);
        assert!(serde_json::from_str::<TokenLabels>(r#"{"sent_id":"s","labels":[2]}"#).is_err());
    }
}
