use serde::{Deserialize, Serialize};

use super::Sentence;

/// Markers placed before the source-domain expression (像 X).
pub const PRE_SOURCE_MARKERS: [&str; 6] = ["像", "好像", "如", "如同", "犹如", "好比"];
/// Markers placed after it (X 一样).
pub const POST_SOURCE_MARKERS: [&str; 3] = ["一样", "似的", "般"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkerKind {
    PreSource,
    PostSource,
}

/// Positions of direct-metaphor flag words in a sentence.
///
/// Diagnostic only: flag words are themselves annotated as non-metaphorical,
/// and nothing here touches the gold labels.
pub fn mflag_scan(sentence: &Sentence) -> Vec<(usize, MarkerKind)> {
    sentence
        .tokens
        .iter()
        .enumerate()
        .filter_map(|(i, t)| {
            let s = t.surface.as_str();
            if PRE_SOURCE_MARKERS.contains(&s) {
                Some((i, MarkerKind::PreSource))
            } else if POST_SOURCE_MARKERS.contains(&s) {
                Some((i, MarkerKind::PostSource))
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::AnnotatedToken;

    fn sentence(surfaces: &[&str]) -> Sentence {
        Sentence {
            sent_id: "s".into(),
            tokens: surfaces
                .iter()
                .map(|s| AnnotatedToken {
                    surface: s.to_string(),
                    metaphor: false,
                })
                .collect(),
        }
    }

    #[test]
    fn finds_markers() {
        assert_eq!(
            mflag_scan(&sentence(&["他", "像", "风"])),
            vec![(1, MarkerKind::PreSource)]
        );
        assert_eq!(
            mflag_scan(&sentence(&["风", "一样"])),
            vec![(1, MarkerKind::PostSource)]
        );
        assert!(mflag_scan(&sentence(&["行走", "很快"])).is_empty());
        // exact surface match only
        assert!(mflag_scan(&sentence(&["好像是", "般若"])).is_empty());
    }
}
