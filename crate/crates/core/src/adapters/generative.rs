use serde::Deserialize;
use serde_json::Value;

use super::ParseOutcome;

/// How the items of a parsed array lined up with the gold tokens.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AlignCounts {
    pub matched: usize,
    pub unmatched_surfaces: usize,
    pub out_of_range: usize,
    /// Items that are neither strings nor non-negative integers.
    pub ignored: usize,
}

/// The first `[` in `raw` that opens a syntactically valid JSON array.
fn first_array(raw: &str) -> Option<Vec<Value>> {
    raw.match_indices('[').find_map(|(start, _)| {
        let mut de = serde_json::Deserializer::from_str(&raw[start..]);
        match Value::deserialize(&mut de) {
            Ok(Value::Array(items)) => Some(items),
            _ => None,
        }
    })
}

/// Decodes a generated answer into one label per gold token.
///
/// The first well-formed JSON array in `raw` is taken. Each string item marks
/// the first not-yet-marked token with that surface (scanning left to right);
/// each non-negative integer item marks the token at that 0-based index.
/// Without any array the sentence is a parse failure and every label is
/// negative.
pub fn parse_generative(raw: &str, tokens: &[&str]) -> (Vec<bool>, ParseOutcome) {
    let mut labels = vec![false; tokens.len()];
    let Some(items) = first_array(raw) else {
        return (labels, ParseOutcome::failure("no well-formed JSON array"));
    };

    let mut counts = AlignCounts::default();
    for item in &items {
        match item {
            Value::String(s) => {
                let s = s.trim();
                match (0..tokens.len()).find(|&j| !labels[j] && tokens[j] == s) {
                    Some(j) => {
                        labels[j] = true;
                        counts.matched += 1;
                    }
                    None => counts.unmatched_surfaces += 1,
                }
            }
            Value::Number(n) => match n.as_u64() {
                Some(k) => match usize::try_from(k).ok().filter(|&k| k < tokens.len()) {
                    Some(k) => {
                        labels[k] = true;
                        counts.matched += 1;
                    }
                    None => counts.out_of_range += 1,
                },
                None => counts.ignored += 1,
            },
            _ => counts.ignored += 1,
        }
    }
    let detail = format!(
        "matched={} unmatched_surfaces={} out_of_range={} ignored={}",
        counts.matched, counts.unmatched_surfaces, counts.out_of_range, counts.ignored
    );
    (labels, ParseOutcome::ok(detail))
}

/// Byte-level entry point: invalid UTF-8 is replaced before parsing.
pub fn parse_generative_bytes(raw: &[u8], tokens: &[&str]) -> (Vec<bool>, ParseOutcome) {
    parse_generative(&String::from_utf8_lossy(raw), tokens)
}
