use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::DictError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub vocab_size: usize,
    pub covered: usize,
    pub coverage_fraction: f64,
    /// Sorted by code point.
    pub uncovered_tokens: Vec<String>,
}

/// Exact-match coverage of `vocab` by the dictionary headwords.
pub fn compute_coverage<'a, H>(
    headwords: H,
    vocab: &BTreeSet<String>,
) -> Result<CoverageReport, DictError>
where
    H: IntoIterator<Item = &'a str>,
{
    if vocab.is_empty() {
        return Err(DictError::EmptyVocabulary);
    }
    let headwords: HashSet<&str> = headwords.into_iter().collect();
    let uncovered_tokens: Vec<String> = vocab
        .iter()
        .filter(|t| !headwords.contains(t.as_str()))
        .cloned()
        .collect();
    let covered = vocab.len() - uncovered_tokens.len();
    Ok(CoverageReport {
        vocab_size: vocab.len(),
        covered,
        coverage_fraction: covered as f64 / vocab.len() as f64,
        uncovered_tokens,
    })
}
