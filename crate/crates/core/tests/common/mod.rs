//! Fixture generators and brute-force reference implementations shared by
//! the integration suites. Nothing here calls into the metric code it checks.
#![allow(dead_code)]

use mipvu_core::adapters::TokenLabels;
use mipvu_core::corpus::{AnnotatedToken, Corpus, Document, Register, Sentence};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const SURFACES: [&str; 12] = [
    "长", "江", "河", "像", "风", "一样", "走", "时间", "流逝", "心", "火", "山",
];

/// Random corpus with up to `max_sents` sentences in total, each 1..=max_tokens tokens.
pub fn random_corpus(rng: &mut ChaCha8Rng, max_sents: usize, max_tokens: usize) -> Corpus {
    let n_sents = rng.gen_range(1..=max_sents);
    let mut documents: Vec<Document> = Vec::new();
    for i in 0..n_sents {
        if documents.is_empty() || rng.gen_bool(0.3) {
            let register = Register::ALL[rng.gen_range(0..3)];
            documents.push(Document {
                doc_id: format!("d{}", documents.len()),
                register,
                sentences: Vec::new(),
            });
        }
        let n_tok = rng.gen_range(1..=max_tokens);
        let tokens = (0..n_tok)
            .map(|_| AnnotatedToken {
                surface: SURFACES[rng.gen_range(0..SURFACES.len())].to_string(),
                metaphor: rng.gen_bool(0.15),
            })
            .collect();
        documents.last_mut().unwrap().sentences.push(Sentence {
            sent_id: format!("s{i}"),
            tokens,
        });
    }
    Corpus { documents }
}

/// Random predictions aligned with `corpus`, in shuffled sentence order.
pub fn random_predictions(rng: &mut ChaCha8Rng, corpus: &Corpus) -> Vec<TokenLabels> {
    let mut preds: Vec<TokenLabels> = corpus
        .gold_labels()
        .into_iter()
        .map(|g| TokenLabels {
            sent_id: g.sent_id,
            labels: g
                .labels
                .iter()
                .map(|&gold| if rng.gen_bool(0.8) { gold } else { !gold })
                .collect(),
        })
        .collect();
    for i in (1..preds.len()).rev() {
        let j = rng.gen_range(0..=i);
        preds.swap(i, j);
    }
    preds
}

/// (tp, fp, fn, tn) by a per-token loop with a linear id search.
pub fn oracle_counts<'a>(
    gold: impl IntoIterator<Item = (&'a str, &'a [bool])>,
    pred: &[TokenLabels],
) -> (u64, u64, u64, u64) {
    let (mut tp, mut fp, mut fneg, mut tn) = (0, 0, 0, 0);
    for (id, g) in gold {
        let p = &pred
            .iter()
            .find(|p| p.sent_id == id)
            .expect("pred present")
            .labels;
        for k in 0..g.len() {
            match (g[k], p[k]) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (true, false) => fneg += 1,
                (false, false) => tn += 1,
            }
        }
    }
    (tp, fp, fneg, tn)
}

/// (pos_precision, pos_recall, pos_f1, neg_f1, macro_f1) with 0/0 = 0 and
/// F1 in count form, 2·tp / (2·tp + fp + fn).
pub fn oracle_scores(tp: u64, fp: u64, fneg: u64, tn: u64) -> (f64, f64, f64, f64, f64) {
    fn div(a: u64, b: u64) -> f64 {
        if b == 0 {
            0.0
        } else {
            a as f64 / b as f64
        }
    }
    let pos = div(2 * tp, 2 * tp + fp + fneg);
    let neg = div(2 * tn, 2 * tn + fneg + fp);
    (
        div(tp, tp + fp),
        div(tp, tp + fneg),
        pos,
        neg,
        (pos + neg) / 2.0,
    )
}

/// Textbook `2PR / (P + R)`; agrees with the count form up to rounding.
pub fn harmonic_f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Gold `(sent_id, labels)` pairs of one register, by filtering.
pub fn gold_for_register(corpus: &Corpus, register: Register) -> Vec<(String, Vec<bool>)> {
    let mut out = Vec::new();
    for doc in &corpus.documents {
        if doc.register != register {
            continue;
        }
        for s in &doc.sentences {
            out.push((
                s.sent_id.clone(),
                s.tokens.iter().map(|t| t.metaphor).collect(),
            ));
        }
    }
    out
}

/// Textbook two-pass mean and population standard deviation.
pub fn two_pass(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mut sum = 0.0;
    for v in values {
        sum += v;
    }
    let mean = sum / n;
    let mut sq = 0.0;
    for v in values {
        sq += (v - mean).powi(2);
    }
    (mean, (sq / n).sqrt())
}

/// Dictionary records forming a redirect chain `h0 → h1 → … → h{hops}`,
/// with the last entry literal.
pub fn chain(prefix: &str, hops: usize) -> Vec<(String, String)> {
    (0..=hops)
        .map(|i| {
            let gloss = if i < hops {
                format!("见〖{prefix}{}〗", i + 1)
            } else {
                format!("{prefix}{i}的本义。")
            };
            (format!("{prefix}{i}"), gloss)
        })
        .collect()
}
