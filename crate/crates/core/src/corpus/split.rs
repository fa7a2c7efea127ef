//! Reproducible document-level train/dev/test split.
//!
//! The shuffle is part of the manifest contract, so it uses a fully
//! specified generator instead of a library RNG:
//!
//! - state₀ = seed (u64)
//! - stateₖ₊₁ = stateₖ · 6364136223846793005 + 1442695040888963407 (mod 2⁶⁴)
//! - each draw advances the state once and returns its upper 32 bits
//!
//! Doc ids are sorted by code point, then shuffled with Fisher–Yates from the
//! last position down: for i = n−1 … 1, j = (draw · (i+1)) >> 32, swap(i, j).
//! The first `train` ids go to train, the next `dev` to dev, the rest to test,
//! with train = ⌊r_train·N⌋, test = round-half-up(r_test·N), dev = remainder.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Corpus;

const LCG_MUL: u64 = 6364136223846793005;
const LCG_INC: u64 = 1442695040888963407;

// Absorbs binary representation error in r·N before floor/round.
const COUNT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(LCG_MUL).wrapping_add(LCG_INC);
        (self.state >> 32) as u32
    }

    /// Draw in `0..bound` by multiply-shift.
    pub fn below(&mut self, bound: u32) -> u32 {
        ((u64::from(self.next_u32()) * u64::from(bound)) >> 32) as u32
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below((i + 1) as u32) as usize;
            items.swap(i, j);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitRatios {
    pub train: f64,
    pub dev: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        SplitRatios {
            train: 0.7,
            dev: 0.1,
            test: 0.2,
        }
    }
}

impl SplitRatios {
    pub fn validate(&self) -> Result<(), SplitError> {
        let parts = [self.train, self.dev, self.test];
        if parts.iter().any(|r| !r.is_finite() || *r < 0.0 || *r > 1.0) {
            return Err(SplitError::InvalidRatios(format!(
                "each ratio must lie in [0, 1], got {self:?}"
            )));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(SplitError::InvalidRatios(format!(
                "ratios must sum to 1, got {sum}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Dev,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Train, Partition::Dev, Partition::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Dev => "dev",
            Partition::Test => "test",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Partition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Partition::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown partition {s:?}"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partitions {
    pub train: Vec<String>,
    pub dev: Vec<String>,
    pub test: Vec<String>,
}

impl Partitions {
    pub fn get(&self, p: Partition) -> &[String] {
        match p {
            Partition::Train => &self.train,
            Partition::Dev => &self.dev,
            Partition::Test => &self.test,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub seed: u64,
    pub ratios: SplitRatios,
    pub partitions: Partitions,
}

impl SplitManifest {
    /// Partition of every listed doc id.
    pub fn assignment(&self) -> HashMap<&str, Partition> {
        Partition::ALL
            .into_iter()
            .flat_map(|p| self.partitions.get(p).iter().map(move |d| (d.as_str(), p)))
            .collect()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SplitError {
    #[error("invalid split ratios: {0}")]
    InvalidRatios(String),
    #[error("a three-way split needs at least 3 documents, got {0}")]
    TooFewDocuments(usize),
    #[error("manifest does not match corpus: missing {missing:?}, extra {extra:?}, repeated {repeated:?}")]
    Coverage {
        missing: Vec<String>,
        extra: Vec<String>,
        repeated: Vec<String>,
    },
}

/// Partition sizes `(train, dev, test)` for `n` documents.
pub fn partition_sizes(
    n: usize,
    ratios: &SplitRatios,
) -> Result<(usize, usize, usize), SplitError> {
    ratios.validate()?;
    let nf = n as f64;
    let train = (ratios.train * nf + COUNT_EPS).floor() as usize;
    let test = (ratios.test * nf + 0.5 + COUNT_EPS).floor() as usize;
    let dev = n
        .checked_sub(train + test)
        .ok_or_else(|| SplitError::InvalidRatios(format!("ratios overflow {n} documents")))?;
    Ok((train, dev, test))
}

/// Splits a set of document ids. Input order does not matter.
pub fn split_doc_ids<S: AsRef<str>>(
    doc_ids: &[S],
    seed: u64,
    ratios: SplitRatios,
) -> Result<SplitManifest, SplitError> {
    let n = doc_ids.len();
    ratios.validate()?;
    if n < 3 {
        return Err(SplitError::TooFewDocuments(n));
    }
    let (train, dev, _) = partition_sizes(n, &ratios)?;
    let mut ids: Vec<String> = doc_ids.iter().map(|s| s.as_ref().to_string()).collect();
    ids.sort();
    Lcg64::new(seed).shuffle(&mut ids);

    let test = ids.split_off(train + dev);
    let dev_ids = ids.split_off(train);
    Ok(SplitManifest {
        seed,
        ratios,
        partitions: Partitions {
            train: ids,
            dev: dev_ids,
            test,
        },
    })
}

pub fn make_split(
    corpus: &Corpus,
    seed: u64,
    ratios: SplitRatios,
) -> Result<SplitManifest, SplitError> {
    split_doc_ids(&corpus.doc_ids(), seed, ratios)
}

/// Checks that the manifest lists each corpus document exactly once.
pub fn check_coverage(corpus: &Corpus, manifest: &SplitManifest) -> Result<(), SplitError> {
    let corpus_ids: BTreeSet<&str> = corpus.doc_ids().into_iter().collect();
    let mut seen = BTreeSet::new();
    let mut repeated = BTreeSet::new();
    for p in Partition::ALL {
        for id in manifest.partitions.get(p) {
            if !seen.insert(id.as_str()) {
                repeated.insert(id.clone());
            }
        }
    }
    let missing: Vec<String> = corpus_ids
        .difference(&seen)
        .map(|s| s.to_string())
        .collect();
    let extra: Vec<String> = seen
        .difference(&corpus_ids)
        .map(|s| s.to_string())
        .collect();
    if missing.is_empty() && extra.is_empty() && repeated.is_empty() {
        Ok(())
    } else {
        Err(SplitError::Coverage {
            missing,
            extra,
            repeated: repeated.into_iter().collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCorpora {
    pub train: Corpus,
    pub dev: Corpus,
    pub test: Corpus,
}

impl SplitCorpora {
    pub fn get(&self, p: Partition) -> &Corpus {
        match p {
            Partition::Train => &self.train,
            Partition::Dev => &self.dev,
            Partition::Test => &self.test,
        }
    }
}

/// Materializes the three partitions. Documents keep their corpus order.
pub fn apply_split(corpus: &Corpus, manifest: &SplitManifest) -> Result<SplitCorpora, SplitError> {
    check_coverage(corpus, manifest)?;
    let assignment = manifest.assignment();
    let mut out = SplitCorpora {
        train: Corpus::default(),
        dev: Corpus::default(),
        test: Corpus::default(),
    };
    for doc in &corpus.documents {
        let target = match assignment[doc.doc_id.as_str()] {
            Partition::Train => &mut out.train,
            Partition::Dev => &mut out.dev,
            Partition::Test => &mut out.test,
        };
        target.documents.push(doc.clone());
    }
    Ok(out)
}
