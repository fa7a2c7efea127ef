//! Run configuration in a line-oriented `key = value` format.
//!
//! ```text
//! # paths
//! dump = data/mcd7.jsonl
//! corpus = data/corpus.jsonl
//! split = data/split.json
//! predictions = runs/preds.jsonl
//! out_dir = out
//! seeds = 42, 123, 2024, 7, 31415
//! ratios = 0.7, 0.1, 0.2
//! tau = 0.5
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Every key may appear
//! at most once. Command-line flags take precedence over the file.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::adapters::DEFAULT_TAU;
use crate::corpus::SplitRatios;

pub const DEFAULT_SEEDS: [u64; 5] = [42, 123, 2024, 7, 31415];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("config line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: key {key:?} given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("config line {line}: {key}: {message}")]
    Value {
        line: usize,
        key: String,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dump: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub split: Option<PathBuf>,
    pub predictions: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub seeds: Vec<u64>,
    pub ratios: SplitRatios,
    pub tau: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dump: None,
            corpus: None,
            split: None,
            predictions: None,
            out_dir: None,
            seeds: DEFAULT_SEEDS.to_vec(),
            ratios: SplitRatios::default(),
            tau: DEFAULT_TAU,
        }
    }
}

fn list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(|v| v.trim().parse::<T>().map_err(|e| format!("{v:?}: {e}")))
        .collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(ConfigError::Syntax { line });
            }
            if seen.iter().any(|k| k == key) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            seen.push(key.to_string());
            let bad = |message: String| ConfigError::Value {
                line,
                key: key.to_string(),
                message,
            };
            match key {
                "dump" => cfg.dump = Some(PathBuf::from(value)),
                "corpus" => cfg.corpus = Some(PathBuf::from(value)),
                "split" => cfg.split = Some(PathBuf::from(value)),
                "predictions" => cfg.predictions = Some(PathBuf::from(value)),
                "out_dir" => cfg.out_dir = Some(PathBuf::from(value)),
                "seeds" => {
                    let seeds: Vec<u64> = list(value).map_err(bad)?;
                    if seeds.is_empty() {
                        return Err(bad("seed list is empty".into()));
                    }
                    cfg.seeds = seeds;
                }
                "ratios" => {
                    let r: Vec<f64> = list(value).map_err(bad)?;
                    let [train, dev, test] = r[..] else {
                        return Err(bad(format!("expected 3 ratios, got {}", r.len())));
                    };
                    let ratios = SplitRatios { train, dev, test };
                    ratios.validate().map_err(|e| bad(e.to_string()))?;
                    cfg.ratios = ratios;
                }
                "tau" => {
                    let tau: f64 = value.parse().map_err(|e| bad(format!("{e}")))?;
                    if tau.is_nan() {
                        return Err(bad("tau is NaN".into()));
                    }
                    cfg.tau = tau;
                }
                other => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: other.to_string(),
                    })
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }
}
