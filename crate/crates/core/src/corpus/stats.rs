use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::split::{Partition, SplitError, SplitManifest};
use super::{Corpus, Document, Register};
use crate::display::percent;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsLine {
    pub subset: String,
    pub docs: usize,
    pub sentences: usize,
    pub tokens: usize,
    pub metaphor: usize,
    pub metaphor_fraction: f64,
}

impl StatsLine {
    fn named(subset: &str) -> Self {
        StatsLine {
            subset: subset.to_string(),
            ..Default::default()
        }
    }

    fn add(&mut self, doc: &Document) {
        self.docs += 1;
        self.sentences += doc.sentences.len();
        for s in &doc.sentences {
            self.tokens += s.tokens.len();
            self.metaphor += s.tokens.iter().filter(|t| t.metaphor).count();
        }
    }

    fn finish(&mut self) {
        self.metaphor_fraction = if self.tokens == 0 {
            0.0
        } else {
            self.metaphor as f64 / self.tokens as f64
        };
    }
}

/// Document, sentence, token and metaphor counts by register, with an
/// optional block by split partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub registers: Vec<StatsLine>,
    pub total: StatsLine,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<Vec<StatsLine>>,
}

pub fn corpus_stats(
    corpus: &Corpus,
    manifest: Option<&SplitManifest>,
) -> Result<CorpusStats, SplitError> {
    let mut registers: Vec<StatsLine> = Register::ALL
        .iter()
        .map(|r| StatsLine::named(r.title()))
        .collect();
    let mut total = StatsLine::named("Total");
    for doc in &corpus.documents {
        let slot = Register::ALL
            .iter()
            .position(|r| *r == doc.register)
            .expect("closed enum");
        registers[slot].add(doc);
        total.add(doc);
    }
    registers.iter_mut().for_each(StatsLine::finish);
    total.finish();

    let partitions = match manifest {
        None => None,
        Some(m) => {
            let by_id: HashMap<&str, &Document> = corpus
                .documents
                .iter()
                .map(|d| (d.doc_id.as_str(), d))
                .collect();
            let unknown: Vec<String> = Partition::ALL
                .iter()
                .flat_map(|p| m.partitions.get(*p))
                .filter(|id| !by_id.contains_key(id.as_str()))
                .cloned()
                .collect();
            if !unknown.is_empty() {
                return Err(SplitError::Coverage {
                    missing: Vec::new(),
                    extra: unknown,
                    repeated: Vec::new(),
                });
            }
            let lines = Partition::ALL
                .iter()
                .map(|p| {
                    let mut line = StatsLine::named(match p {
                        Partition::Train => "Train",
                        Partition::Dev => "Dev",
                        Partition::Test => "Test",
                    });
                    for id in m.partitions.get(*p) {
                        line.add(by_id[id.as_str()]);
                    }
                    line.finish();
                    line
                })
                .collect();
            Some(lines)
        }
    };

    Ok(CorpusStats {
        registers,
        total,
        partitions,
    })
}

impl CorpusStats {
    /// Markdown table with the metaphor share as a percentage, 2 decimals.
    pub fn render_markdown(&self) -> String {
        let mut s = String::from(
            "| Subset | #Docs | #Sentences | #Tokens | #Metaphor | %Metaphor |\n|---|---:|---:|---:|---:|---:|\n",
        );
        let mut push = |l: &StatsLine| {
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} |\n",
                l.subset,
                l.docs,
                l.sentences,
                l.tokens,
                l.metaphor,
                percent(l.metaphor_fraction, 2)
            ));
        };
        self.registers.iter().for_each(&mut push);
        push(&self.total);
        if let Some(parts) = &self.partitions {
            parts.iter().for_each(&mut push);
        }
        s
    }
}
