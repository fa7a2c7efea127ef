//! Token-level annotated corpus.
//!
//! On disk the corpus is one JSON object per sentence:
//!
//! ```text
//! {"doc_id": "A01", "register": "academic", "sent_id": "A01-0001",
//!  "tokens": [{"surface": "时间", "label": 0}, {"surface": "流逝", "label": 1}]}
//! ```
//!
//! Sentences of one document must be contiguous. `sent_id` may be a string
//! or an integer and must be unique across the corpus.

mod mflag;
mod split;
mod stats;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::adapters::TokenLabels;
use crate::Error;

pub use mflag::{mflag_scan, MarkerKind, POST_SOURCE_MARKERS, PRE_SOURCE_MARKERS};
pub use split::{
    apply_split, check_coverage, make_split, partition_sizes, split_doc_ids, Lcg64, Partition,
    Partitions, SplitCorpora, SplitError, SplitManifest, SplitRatios,
};
pub use stats::{corpus_stats, CorpusStats, StatsLine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Register {
    Academic,
    News,
    Fiction,
}

impl Register {
    pub const ALL: [Register; 3] = [Register::Academic, Register::News, Register::Fiction];

    pub fn as_str(self) -> &'static str {
        match self {
            Register::Academic => "academic",
            Register::News => "news",
            Register::Fiction => "fiction",
        }
    }

    /// Display label used in tables.
    pub fn title(self) -> &'static str {
        match self {
            Register::Academic => "Academic",
            Register::News => "News",
            Register::Fiction => "Fiction",
        }
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Register {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Register::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown register {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedToken {
    pub surface: String,
    pub metaphor: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub sent_id: String,
    pub tokens: Vec<AnnotatedToken>,
}

impl Sentence {
    pub fn gold(&self) -> TokenLabels {
        TokenLabels {
            sent_id: self.sent_id.clone(),
            labels: self.tokens.iter().map(|t| t.metaphor).collect(),
        }
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub register: Register,
    pub sentences: Vec<Sentence>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: field `{field}`: {message}")]
    Schema {
        line: usize,
        field: &'static str,
        message: String,
    },
    #[error("line {line}: document {doc_id:?} reappears after other documents")]
    DuplicateDocId { line: usize, doc_id: String },
    #[error("line {line}: sentence id {sent_id:?} already used")]
    DuplicateSentId { line: usize, sent_id: String },
    #[error("line {line}: document {doc_id:?} changes register")]
    RegisterConflict { line: usize, doc_id: String },
}

fn field<'a>(
    obj: &'a serde_json::Map<String, Value>,
    name: &'static str,
    line: usize,
) -> Result<&'a Value, CorpusError> {
    obj.get(name).ok_or(CorpusError::Schema {
        line,
        field: name,
        message: "missing".into(),
    })
}

fn schema(line: usize, field: &'static str, message: impl Into<String>) -> CorpusError {
    CorpusError::Schema {
        line,
        field,
        message: message.into(),
    }
}

fn parse_tokens(value: &Value, line: usize) -> Result<Vec<AnnotatedToken>, CorpusError> {
    let items = value
        .as_array()
        .ok_or_else(|| schema(line, "tokens", "expected an array"))?;
    if items.is_empty() {
        return Err(schema(line, "tokens", "sentence has no tokens"));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let obj = item
                .as_object()
                .ok_or_else(|| schema(line, "tokens", format!("token {i} is not an object")))?;
            let surface = obj
                .get("surface")
                .and_then(Value::as_str)
                .filter(|s| !s.is_empty())
                .ok_or_else(|| {
                    schema(
                        line,
                        "surface",
                        format!("token {i}: expected non-empty string"),
                    )
                })?;
            let metaphor = match obj.get("label").and_then(Value::as_u64) {
                Some(0) => false,
                Some(1) => true,
                _ => return Err(schema(line, "label", format!("token {i}: expected 0 or 1"))),
            };
            Ok(AnnotatedToken {
                surface: surface.to_string(),
                metaphor,
            })
        })
        .collect()
}

impl Corpus {
    /// Parses corpus JSONL text.
    pub fn from_jsonl(text: &str) -> Result<Self, CorpusError> {
        let mut corpus = Corpus::default();
        let mut closed_docs: HashSet<String> = HashSet::new();
        let mut sent_ids: HashSet<String> = HashSet::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let value: Value =
                serde_json::from_str(raw).map_err(|e| schema(line, "record", e.to_string()))?;
            let obj = value
                .as_object()
                .ok_or_else(|| schema(line, "record", "expected an object"))?;

            let doc_id = field(obj, "doc_id", line)?
                .as_str()
                .filter(|s| !s.is_empty())
                .ok_or_else(|| schema(line, "doc_id", "expected non-empty string"))?;
            let register: Register = field(obj, "register", line)?
                .as_str()
                .ok_or_else(|| schema(line, "register", "expected string"))?
                .parse()
                .map_err(|e: String| schema(line, "register", e))?;
            let sent_id = match field(obj, "sent_id", line)? {
                Value::String(s) if !s.is_empty() => s.clone(),
                Value::Number(n) if n.is_u64() || n.is_i64() => n.to_string(),
                _ => return Err(schema(line, "sent_id", "expected string or integer")),
            };
            let tokens = parse_tokens(field(obj, "tokens", line)?, line)?;

            if !sent_ids.insert(sent_id.clone()) {
                return Err(CorpusError::DuplicateSentId { line, sent_id });
            }
            let continues = corpus.documents.last().is_some_and(|d| d.doc_id == doc_id);
            if continues {
                let doc = corpus.documents.last_mut().expect("checked above");
                if doc.register != register {
                    return Err(CorpusError::RegisterConflict {
                        line,
                        doc_id: doc_id.to_string(),
                    });
                }
                doc.sentences.push(Sentence { sent_id, tokens });
            } else {
                if let Some(prev) = corpus.documents.last() {
                    closed_docs.insert(prev.doc_id.clone());
                }
                if closed_docs.contains(doc_id) {
                    return Err(CorpusError::DuplicateDocId {
                        line,
                        doc_id: doc_id.to_string(),
                    });
                }
                corpus.documents.push(Document {
                    doc_id: doc_id.to_string(),
                    register,
                    sentences: vec![Sentence { sent_id, tokens }],
                });
            }
        }
        Ok(corpus)
    }

    /// Serializes back to the JSONL corpus format.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for doc in &self.documents {
            for s in &doc.sentences {
                let tokens: Vec<Value> = s
                    .tokens
                    .iter()
                    .map(|t| serde_json::json!({"surface": t.surface, "label": u8::from(t.metaphor)}))
                    .collect();
                let record = serde_json::json!({
                    "doc_id": doc.doc_id,
                    "register": doc.register,
                    "sent_id": s.sent_id,
                    "tokens": tokens,
                });
                out.push_str(&record.to_string());
                out.push('\n');
            }
        }
        out
    }

    pub fn doc_ids(&self) -> Vec<&str> {
        self.documents.iter().map(|d| d.doc_id.as_str()).collect()
    }

    pub fn sentences(&self) -> impl Iterator<Item = (&Document, &Sentence)> {
        self.documents
            .iter()
            .flat_map(|d| d.sentences.iter().map(move |s| (d, s)))
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    pub fn token_count(&self) -> usize {
        self.sentences().map(|(_, s)| s.tokens.len()).sum()
    }

    /// Unique token surfaces.
    pub fn vocab(&self) -> BTreeSet<String> {
        self.sentences()
            .flat_map(|(_, s)| s.tokens.iter().map(|t| t.surface.clone()))
            .collect()
    }

    pub fn gold_labels(&self) -> Vec<TokenLabels> {
        self.sentences().map(|(_, s)| s.gold()).collect()
    }
}

pub fn load_corpus(path: &Path) -> crate::Result<Corpus> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(Corpus::from_jsonl(&text)?)
}
