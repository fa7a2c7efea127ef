//! Prediction files: one `{sent_id, kind, payload}` object per line.
//!
//! | kind         | payload                              |
//! |--------------|--------------------------------------|
//! | `probs`      | array of per-token probabilities     |
//! | `generative` | raw generated text (string)          |
//! | `bio`        | array of `"B"` / `"I"` / `"O"` tags  |

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    bits, decode_bio, parse_generative, threshold_probs, AdapterError, ParseOutcome, ParseStatus,
    TokenLabels,
};
use crate::corpus::{Corpus, Sentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictionKind {
    Probs,
    Generative,
    Bio,
}

impl PredictionKind {
    fn name(self) -> &'static str {
        match self {
            PredictionKind::Probs => "probs",
            PredictionKind::Generative => "generative",
            PredictionKind::Bio => "bio",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub sent_id: String,
    pub kind: PredictionKind,
    pub payload: Value,
}

/// One line of a decoded labels file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub sent_id: String,
    #[serde(with = "bits")]
    pub labels: Vec<bool>,
    pub status: ParseStatus,
    #[serde(default)]
    pub detail: String,
}

impl LabelRecord {
    pub fn token_labels(&self) -> TokenLabels {
        TokenLabels {
            sent_id: self.sent_id.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn outcome(&self) -> ParseOutcome {
        ParseOutcome {
            status: self.status,
            detail: self.detail.clone(),
        }
    }
}

fn decode_one(
    record: &PredictionRecord,
    gold: &Sentence,
    tau: f64,
) -> Result<LabelRecord, AdapterError> {
    let n = gold.tokens.len();
    let payload_err = |message: &str| AdapterError::Payload {
        sent_id: record.sent_id.clone(),
        kind: record.kind.name(),
        message: message.to_string(),
    };
    let check_len = |found: usize| {
        if found == n {
            Ok(())
        } else {
            Err(AdapterError::LengthMismatch {
                sent_id: record.sent_id.clone(),
                expected: n,
                found,
            })
        }
    };

    let (labels, outcome) = match record.kind {
        PredictionKind::Probs => {
            let probs: Vec<f64> = serde_json::from_value(record.payload.clone())
                .map_err(|e| payload_err(&e.to_string()))?;
            check_len(probs.len())?;
            (threshold_probs(&probs, tau)?, ParseOutcome::ok(""))
        }
        PredictionKind::Bio => {
            let tags: Vec<String> = serde_json::from_value(record.payload.clone())
                .map_err(|e| payload_err(&e.to_string()))?;
            check_len(tags.len())?;
            let decoded = decode_bio(&tags)?;
            let detail = format!("orphans={}", decoded.orphans);
            (decoded.labels, ParseOutcome::ok(detail))
        }
        PredictionKind::Generative => {
            let raw = record
                .payload
                .as_str()
                .ok_or_else(|| payload_err("expected a string"))?;
            parse_generative(raw, &gold.surfaces())
        }
    };
    Ok(LabelRecord {
        sent_id: record.sent_id.clone(),
        labels,
        status: outcome.status,
        detail: outcome.detail,
    })
}

/// Decodes every prediction against its gold sentence, in input order.
pub fn decode_predictions(
    corpus: &Corpus,
    records: &[PredictionRecord],
    tau: f64,
) -> Result<Vec<LabelRecord>, AdapterError> {
    let by_id: HashMap<&str, &Sentence> = corpus
        .sentences()
        .map(|(_, s)| (s.sent_id.as_str(), s))
        .collect();
    let mut seen = HashSet::new();
    records
        .iter()
        .map(|record| {
            let gold = by_id
                .get(record.sent_id.as_str())
                .ok_or_else(|| AdapterError::UnknownSentence(record.sent_id.clone()))?;
            if !seen.insert(record.sent_id.as_str()) {
                return Err(AdapterError::DuplicateSentence(record.sent_id.clone()));
            }
            decode_one(record, gold, tau)
        })
        .collect()
}
