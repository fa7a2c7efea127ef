use serde::{Deserialize, Serialize};

use super::xref::CrossRef;
use super::MeaningSource;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sense {
    /// Marker value, 1-based. A gloss without markers is sense 1.
    pub ordinal: u32,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_ref: Option<CrossRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SenseSplit {
    pub senses: Vec<Sense>,
    /// Markers out of order, repeated, or followed by no text.
    pub marker_anomalous: bool,
}

/// Numeric value of a circled-number sense marker (① .. ㊿).
fn marker_value(c: char) -> Option<u32> {
    let c = c as u32;
    match c {
        0x2460..=0x2473 => Some(c - 0x2460 + 1),  // ① .. ⑳
        0x3251..=0x325F => Some(c - 0x3251 + 21), // ㉑ .. ㉟
        0x32B1..=0x32BF => Some(c - 0x32B1 + 36), // ㊱ .. ㊿
        _ => None,
    }
}

/// Splits a gloss at circled-digit markers.
///
/// Text before the first marker (pronunciation, part-of-speech notes) is
/// dropped. Senses come back sorted by marker value; any disorder is
/// reported through [`SenseSplit::marker_anomalous`].
pub fn split_senses(gloss: &str) -> SenseSplit {
    let mut marked: Vec<(u32, usize)> = Vec::new();
    for (pos, c) in gloss.char_indices() {
        if let Some(v) = marker_value(c) {
            marked.push((v, pos));
        }
    }

    if marked.is_empty() {
        let text = gloss.trim();
        let senses = if text.is_empty() {
            Vec::new()
        } else {
            vec![Sense {
                ordinal: 1,
                text: text.to_string(),
                cross_ref: None,
            }]
        };
        return SenseSplit {
            senses,
            marker_anomalous: false,
        };
    }

    let mut anomalous = false;
    let mut senses = Vec::with_capacity(marked.len());
    for (i, &(ordinal, start)) in marked.iter().enumerate() {
        // every marker is a single 3-byte code point
        let body_start = start + gloss[start..].chars().next().map_or(0, char::len_utf8);
        let body_end = marked.get(i + 1).map_or(gloss.len(), |&(_, next)| next);
        let text = gloss[body_start..body_end].trim();
        if text.is_empty() {
            anomalous = true;
            continue;
        }
        senses.push(Sense {
            ordinal,
            text: text.to_string(),
            cross_ref: None,
        });
    }

    let monotonic = marked.windows(2).all(|w| w[0].0 < w[1].0);
    if !monotonic {
        anomalous = true;
        senses.sort_by_key(|s| s.ordinal);
    }
    SenseSplit {
        senses,
        marker_anomalous: anomalous,
    }
}

/// First-sense rule: the basic meaning is the lowest-numbered sense, or the
/// headword itself when no sense text could be parsed.
pub fn select_basic_meaning(headword: &str, senses: &[Sense]) -> (String, MeaningSource) {
    match senses.first() {
        Some(first) => (first.text.clone(), MeaningSource::FirstSense),
        None => (headword.to_string(), MeaningSource::HeadwordFallback),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sense(ordinal: u32, text: &str) -> Sense {
        Sense {
            ordinal,
            text: text.into(),
            cross_ref: None,
        }
    }

    #[test]
    fn splits_on_circled_digits() {
        let split = split_senses("①走。②去。");
        assert_eq!(split.senses, vec![sense(1, "走。"), sense(2, "去。")]);
        assert!(!split.marker_anomalous);
    }

    #[test]
    fn unmarked_and_empty_glosses() {
        assert_eq!(split_senses("行走。").senses, vec![sense(1, "行走。")]);
        assert!(split_senses("").senses.is_empty());
        assert!(split_senses("   ").senses.is_empty());
    }

    #[test]
    fn out_of_order_markers_are_sorted_and_flagged() {
        let split = split_senses("①甲。③丙。②乙。");
        assert_eq!(
            split.senses,
            vec![sense(1, "甲。"), sense(2, "乙。"), sense(3, "丙。")]
        );
        assert!(split.marker_anomalous);
    }

    #[test]
    fn preamble_is_dropped_and_empty_bodies_flagged() {
        let split = split_senses("zǒu 动 ①走。②  ③跑。");
        assert_eq!(split.senses, vec![sense(1, "走。"), sense(3, "跑。")]);
        assert!(split.marker_anomalous);
    }

    #[test]
    fn marker_inventory_reaches_fifty() {
        assert_eq!(marker_value('①'), Some(1));
        assert_eq!(marker_value('⑳'), Some(20));
        assert_eq!(marker_value('㉑'), Some(21));
        assert_eq!(marker_value('㉟'), Some(35));
        assert_eq!(marker_value('㊱'), Some(36));
        assert_eq!(marker_value('㊿'), Some(50));
        assert_eq!(marker_value('1'), None);
        let gloss: String = (1..=24)
            .map(|n| {
                let c = if n <= 20 {
                    char::from_u32(0x2460 + n - 1)
                } else {
                    char::from_u32(0x3251 + n - 21)
                };
                format!("{}义{n}。", c.unwrap())
            })
            .collect();
        let split = split_senses(&gloss);
        assert_eq!(split.senses.len(), 24);
        assert_eq!(split.senses[23], sense(24, "义24。"));
        assert!(!split.marker_anomalous);
    }

    #[test]
    fn basic_meaning_rules() {
        let senses = vec![sense(1, "S1"), sense(2, "S2")];
        assert_eq!(
            select_basic_meaning("词", &senses),
            ("S1".to_string(), MeaningSource::FirstSense)
        );
        assert_eq!(
            select_basic_meaning("囫囵", &[]),
            ("囫囵".to_string(), MeaningSource::HeadwordFallback)
        );
    }
}
