use std::str::FromStr;

use super::AdapterError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BioTag {
    B,
    I,
    O,
}

impl FromStr for BioTag {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "B" => Ok(BioTag::B),
            "I" => Ok(BioTag::I),
            "O" => Ok(BioTag::O),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BioDecode {
    pub labels: Vec<bool>,
    /// `I` tags with no span to continue, promoted to `B`.
    pub orphans: usize,
}

/// Token-level reading of a BIO sequence: every token inside a span is
/// positive. An `I` that does not continue a span opens one instead.
pub fn decode_bio<S: AsRef<str>>(tags: &[S]) -> Result<BioDecode, AdapterError> {
    let mut labels = Vec::with_capacity(tags.len());
    let mut orphans = 0;
    let mut inside = false;
    for (index, tag) in tags.iter().enumerate() {
        let tag: BioTag = tag
            .as_ref()
            .parse()
            .map_err(|()| AdapterError::UnknownTag {
                index,
                tag: tag.as_ref().to_string(),
            })?;
        match tag {
            BioTag::B => inside = true,
            BioTag::I => {
                if !inside {
                    orphans += 1;
                }
                inside = true;
            }
            BioTag::O => inside = false,
        }
        labels.push(tag != BioTag::O);
    }
    Ok(BioDecode { labels, orphans })
}
