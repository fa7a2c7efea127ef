use serde::{Deserialize, Serialize};

/// The redirect keyword opening a cross-reference sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefIndicator {
    /// 见
    See,
    /// 同
    SameAs,
    /// 参看
    Cf,
}

impl RefIndicator {
    pub fn keyword(self) -> &'static str {
        match self {
            RefIndicator::See => "见",
            RefIndicator::SameAs => "同",
            RefIndicator::Cf => "参看",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossRef {
    pub indicator: RefIndicator,
    pub target: String,
}

/// Outcome of scanning one sense for a redirect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefScan {
    /// No indicator followed by a bracketed target.
    Plain,
    Found(CrossRef),
    /// An indicator and an opening bracket were found but no usable target
    /// (unterminated or empty span).
    Anomalous,
}

// Longest keyword first so 参看 is not shadowed.
const INDICATORS: [RefIndicator; 3] = [RefIndicator::Cf, RefIndicator::See, RefIndicator::SameAs];

const BRACKETS: [(char, char); 9] = [
    ('〖', '〗'),
    ('【', '】'),
    ('「', '」'),
    ('『', '』'),
    ('《', '》'),
    ('“', '”'),
    ('‘', '’'),
    ('"', '"'),
    ('\'', '\''),
];

/// Scans the head of a sense for `见〖X〗`, `同'X'`, `参看“X”` and similar.
///
/// Only the first bracketed span after the indicator is taken, so a sense
/// listing several targets redirects to the first one.
pub fn scan_cross_ref(sense_text: &str) -> RefScan {
    let text = sense_text.trim_start();
    let Some((indicator, rest)) = INDICATORS
        .iter()
        .find_map(|ind| text.strip_prefix(ind.keyword()).map(|rest| (*ind, rest)))
    else {
        return RefScan::Plain;
    };
    let rest = rest
        .trim_start()
        .trim_start_matches([':', '：'])
        .trim_start();
    let mut chars = rest.chars();
    let Some(open) = chars.next() else {
        return RefScan::Plain;
    };
    let Some(&(_, close)) = BRACKETS.iter().find(|(o, _)| *o == open) else {
        return RefScan::Plain;
    };
    let body = chars.as_str();
    match body.find(close) {
        Some(end) => {
            let target = body[..end].trim();
            if target.is_empty() {
                RefScan::Anomalous
            } else {
                RefScan::Found(CrossRef {
                    indicator,
                    target: target.to_string(),
                })
            }
        }
        None => RefScan::Anomalous,
    }
}

pub fn detect_cross_ref(sense_text: &str) -> Option<CrossRef> {
    match scan_cross_ref(sense_text) {
        RefScan::Found(r) => Some(r),
        RefScan::Plain | RefScan::Anomalous => None,
    }
}
