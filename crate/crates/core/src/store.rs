//! Basic-meaning embedding store.
//!
//! Two files make up a store:
//!
//! ```text
//! embeddings.bin
//!   offset  size  field
//!   0       4     magic  b"BMEV"
//!   4       4     version (u32 LE) = 1
//!   8       4     rows    (u32 LE)
//!   12      4     dim     (u32 LE)
//!   16      ...   rows * dim float32 LE, row-major
//!
//! embeddings.index
//!   <headword>\t<row>\n     one line per row, ordered by row id
//! ```
//!
//! Row ids are assigned by sorting headwords by code point, so a store built
//! from the same lexicon is byte-identical whatever the dump order was.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dict::ResolvedTable;
use crate::io::write_atomic;

pub const EMBEDDING_DIM: usize = 1024;
pub const MAGIC: [u8; 4] = *b"BMEV";
pub const STORE_VERSION: u32 = 1;
pub const HEADER_LEN: usize = 16;

pub const MATRIX_FILE: &str = "embeddings.bin";
pub const INDEX_FILE: &str = "embeddings.index";
pub const WORKLIST_FILE: &str = "worklist.jsonl";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("matrix file is {0} bytes, shorter than the {HEADER_LEN}-byte header")]
    MissingHeader(usize),
    #[error("bad magic {0:?}, expected {MAGIC:?}")]
    BadMagic([u8; 4]),
    #[error("unsupported store version {0}")]
    UnsupportedVersion(u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("matrix payload is {actual} bytes, header implies {expected}")]
    PayloadLength { expected: usize, actual: usize },
    #[error("row/index count mismatch: matrix has {rows} rows, index has {index} entries")]
    CountMismatch { rows: usize, index: usize },
    #[error("non-finite value {value} at row {row}, column {col}")]
    NonFinite { row: usize, col: usize, value: f32 },
    #[error("index line {line}: {message}")]
    IndexSyntax { line: usize, message: String },
    #[error("index row ids are not a permutation of 0..{rows}: {message}")]
    RowIds { rows: usize, message: String },
    #[error("headword {0:?} appears more than once in the index")]
    DuplicateHeadword(String),
    #[error("headword {0:?} cannot be stored (empty, or contains tab/newline)")]
    InvalidHeadword(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// One text for the encoder to embed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkItem {
    pub row: u32,
    pub headword: String,
    pub text: String,
}

/// Assigns row ids in headword order and lists the basic-meaning texts to
/// encode, one per row.
pub fn build_index(resolved: &ResolvedTable) -> (BTreeMap<String, u32>, Vec<WorkItem>) {
    // ResolvedTable is a BTreeMap, so iteration is already code-point order.
    let mut index = BTreeMap::new();
    let mut worklist = Vec::with_capacity(resolved.len());
    for (row, entry) in resolved.values().enumerate() {
        let row = row as u32;
        index.insert(entry.headword.clone(), row);
        worklist.push(WorkItem {
            row,
            headword: entry.headword.clone(),
            text: entry.basic_meaning.clone(),
        });
    }
    (index, worklist)
}

/// Result of looking up a token: its vector, or the zero vector with the
/// OOV flag set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lookup<'a> {
    pub vector: &'a [f32],
    pub oov: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    dim: usize,
    index: HashMap<String, u32>,
    matrix: Vec<f32>,
    zeros: Vec<f32>,
}

impl EmbeddingStore {
    /// Validates and assembles a store. `matrix` is row-major with
    /// `index.len()` rows of `dim` values.
    pub fn new(
        dim: usize,
        index: impl IntoIterator<Item = (String, u32)>,
        matrix: Vec<f32>,
    ) -> Result<Self, StoreError> {
        let mut map = HashMap::new();
        for (headword, row) in index {
            if headword.is_empty() || headword.contains(['\t', '\n', '\r']) {
                return Err(StoreError::InvalidHeadword(headword));
            }
            if map.insert(headword.clone(), row).is_some() {
                return Err(StoreError::DuplicateHeadword(headword));
            }
        }
        if dim == 0 || !matrix.len().is_multiple_of(dim) {
            return Err(StoreError::PayloadLength {
                expected: map.len() * dim * 4,
                actual: matrix.len() * 4,
            });
        }
        let rows = matrix.len() / dim;
        if rows != map.len() {
            return Err(StoreError::CountMismatch {
                rows,
                index: map.len(),
            });
        }
        check_row_ids(map.values().copied(), rows)?;
        if let Some(pos) = matrix.iter().position(|v| !v.is_finite()) {
            return Err(StoreError::NonFinite {
                row: pos / dim,
                col: pos % dim,
                value: matrix[pos],
            });
        }
        Ok(EmbeddingStore {
            dim,
            index: map,
            matrix,
            zeros: vec![0.0; dim],
        })
    }

    /// Loads `embeddings.bin` and `embeddings.index` from `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self, StoreError> {
        Self::load(&dir.join(MATRIX_FILE), &dir.join(INDEX_FILE))
    }

    pub fn load(matrix_path: &Path, index_path: &Path) -> Result<Self, StoreError> {
        Self::load_with_dim(matrix_path, index_path, EMBEDDING_DIM)
    }

    pub fn load_with_dim(
        matrix_path: &Path,
        index_path: &Path,
        expected_dim: usize,
    ) -> Result<Self, StoreError> {
        let bytes = std::fs::read(matrix_path).map_err(io_err(matrix_path))?;
        let (rows, matrix) = decode_matrix(&bytes, expected_dim)?;
        let text = std::fs::read_to_string(index_path).map_err(io_err(index_path))?;
        let index = parse_index(&text)?;
        if index.len() != rows {
            return Err(StoreError::CountMismatch {
                rows,
                index: index.len(),
            });
        }
        Self::new(expected_dim, index, matrix)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.index.len()
    }

    pub fn row(&self, id: u32) -> Option<&[f32]> {
        let start = id as usize * self.dim;
        self.matrix.get(start..start + self.dim)
    }

    pub fn row_id(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn lookup(&self, token: &str) -> Lookup<'_> {
        match self.row_id(token).and_then(|id| self.row(id)) {
            Some(vector) => Lookup { vector, oov: false },
            None => Lookup {
                vector: &self.zeros,
                oov: true,
            },
        }
    }

    /// Index entries ordered by row id.
    pub fn index_entries(&self) -> Vec<(&str, u32)> {
        let mut entries: Vec<(&str, u32)> =
            self.index.iter().map(|(h, r)| (h.as_str(), *r)).collect();
        entries.sort_by_key(|&(_, r)| r);
        entries
    }

    pub fn matrix(&self) -> &[f32] {
        &self.matrix
    }

    pub fn write_dir(&self, dir: &Path) -> crate::Result<()> {
        write_atomic(
            &dir.join(MATRIX_FILE),
            &encode_matrix(self.dim, &self.matrix),
        )?;
        write_atomic(
            &dir.join(INDEX_FILE),
            render_index(self.index_entries()).as_bytes(),
        )
    }
}

fn check_row_ids(ids: impl Iterator<Item = u32>, rows: usize) -> Result<(), StoreError> {
    let mut seen = HashSet::with_capacity(rows);
    for id in ids {
        if id as usize >= rows {
            return Err(StoreError::RowIds {
                rows,
                message: format!("row {id} out of range"),
            });
        }
        if !seen.insert(id) {
            return Err(StoreError::RowIds {
                rows,
                message: format!("row {id} assigned twice"),
            });
        }
    }
    Ok(())
}

pub fn encode_matrix(dim: usize, matrix: &[f32]) -> Vec<u8> {
    let rows = matrix.len().checked_div(dim).unwrap_or(0);
    let mut out = Vec::with_capacity(HEADER_LEN + matrix.len() * 4);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&STORE_VERSION.to_le_bytes());
    out.extend_from_slice(&(rows as u32).to_le_bytes());
    out.extend_from_slice(&(dim as u32).to_le_bytes());
    for v in matrix {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Parses a matrix file, returning `(rows, values)`.
pub fn decode_matrix(bytes: &[u8], expected_dim: usize) -> Result<(usize, Vec<f32>), StoreError> {
    if bytes.len() < HEADER_LEN {
        return Err(StoreError::MissingHeader(bytes.len()));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4-byte slice"));
    let magic: [u8; 4] = bytes[0..4].try_into().expect("4-byte slice");
    if magic != MAGIC {
        return Err(StoreError::BadMagic(magic));
    }
    let version = word(4);
    if version != STORE_VERSION {
        return Err(StoreError::UnsupportedVersion(version));
    }
    let rows = word(8) as usize;
    let dim = word(12) as usize;
    if dim != expected_dim {
        return Err(StoreError::DimMismatch {
            expected: expected_dim,
            found: dim,
        });
    }
    let payload = &bytes[HEADER_LEN..];
    let expected = rows * dim * 4;
    if payload.len() != expected {
        return Err(StoreError::PayloadLength {
            expected,
            actual: payload.len(),
        });
    }
    let values = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4-byte chunk")))
        .collect();
    Ok((rows, values))
}

pub fn render_index<'a>(entries: impl IntoIterator<Item = (&'a str, u32)>) -> String {
    let mut s = String::new();
    for (headword, row) in entries {
        s.push_str(headword);
        s.push('\t');
        s.push_str(&row.to_string());
        s.push('\n');
    }
    s
}

pub fn parse_index(text: &str) -> Result<Vec<(String, u32)>, StoreError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let syntax = |message: &str| StoreError::IndexSyntax {
            line: i + 1,
            message: message.to_string(),
        };
        let (headword, row) = line
            .rsplit_once('\t')
            .ok_or_else(|| syntax("expected <headword>\\t<row>"))?;
        let row = row
            .parse::<u32>()
            .map_err(|e| syntax(&format!("row id: {e}")))?;
        out.push((headword.to_string(), row));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(rows: usize, dim: usize) -> (Vec<(String, u32)>, Vec<f32>) {
        let index = (0..rows).map(|r| (format!("w{r}"), r as u32)).collect();
        let matrix = (0..rows * dim).map(|i| i as f32 * 0.5 - 3.0).collect();
        (index, matrix)
    }

    fn write_raw(dir: &Path, dim: usize, matrix: &[f32], index: &[(String, u32)]) {
        std::fs::write(dir.join(MATRIX_FILE), encode_matrix(dim, matrix)).unwrap();
        std::fs::write(
            dir.join(INDEX_FILE),
            render_index(index.iter().map(|(h, r)| (h.as_str(), *r))),
        )
        .unwrap();
    }

    #[test]
    fn loads_valid_store() {
        let dir = tempfile::tempdir().unwrap();
        let (index, matrix) = synthetic(2, EMBEDDING_DIM);
        write_raw(dir.path(), EMBEDDING_DIM, &matrix, &index);
        let store = EmbeddingStore::load_dir(dir.path()).unwrap();
        assert_eq!(store.rows(), 2);
        let hit = store.lookup("w0");
        assert!(!hit.oov);
        assert_eq!(hit.vector, &matrix[..EMBEDDING_DIM]);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let dir = tempfile::tempdir().unwrap();
        let (index, matrix) = synthetic(2, 512);
        write_raw(dir.path(), 512, &matrix, &index);
        assert!(matches!(
            EmbeddingStore::load_dir(dir.path()),
            Err(StoreError::DimMismatch {
                expected: 1024,
                found: 512
            })
        ));
    }

    #[test]
    fn rejects_count_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let (index, matrix) = synthetic(3, EMBEDDING_DIM);
        write_raw(dir.path(), EMBEDDING_DIM, &matrix, &index[..2]);
        assert!(matches!(
            EmbeddingStore::load_dir(dir.path()),
            Err(StoreError::CountMismatch { rows: 3, index: 2 })
        ));
    }

    #[test]
    fn rejects_non_finite_and_bad_rows() {
        let (index, mut matrix) = synthetic(2, 4);
        matrix[5] = f32::NAN;
        assert!(matches!(
            EmbeddingStore::new(4, index.clone(), matrix),
            Err(StoreError::NonFinite { row: 1, col: 1, .. })
        ));
        let (_, matrix) = synthetic(2, 4);
        let bad = vec![("a".to_string(), 0), ("b".to_string(), 0)];
        assert!(matches!(
            EmbeddingStore::new(4, bad, matrix.clone()),
            Err(StoreError::RowIds { .. })
        ));
        let dup = vec![("a".to_string(), 0), ("a".to_string(), 1)];
        assert!(matches!(
            EmbeddingStore::new(4, dup, matrix),
            Err(StoreError::DuplicateHeadword(_))
        ));
    }

    #[test]
    fn rejects_truncated_and_foreign_files() {
        assert!(matches!(
            decode_matrix(b"BMEV", 4),
            Err(StoreError::MissingHeader(4))
        ));
        let mut bytes = encode_matrix(4, &[1.0; 8]);
        bytes.pop();
        assert!(matches!(
            decode_matrix(&bytes, 4),
            Err(StoreError::PayloadLength { .. })
        ));
        let mut bytes = encode_matrix(4, &[1.0; 8]);
        bytes[0] = b'X';
        assert!(matches!(
            decode_matrix(&bytes, 4),
            Err(StoreError::BadMagic(_))
        ));
    }

    #[test]
    fn absent_token_gets_zero_vector() {
        let (index, matrix) = synthetic(1, 8);
        let store = EmbeddingStore::new(8, index, matrix).unwrap();
        let miss = store.lookup("nope");
        assert!(miss.oov);
        assert_eq!(miss.vector, &[0.0; 8]);
    }

    #[test]
    fn header_layout_is_fixed() {
        let bytes = encode_matrix(2, &[1.0, 2.0]);
        assert_eq!(&bytes[..4], b"BMEV");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(&bytes[8..12], &1u32.to_le_bytes());
        assert_eq!(&bytes[12..16], &2u32.to_le_bytes());
        assert_eq!(&bytes[16..20], &1.0f32.to_le_bytes());
        assert_eq!(bytes.len(), 24);
    }

    #[test]
    fn index_sorted_by_headword() {
        use crate::dict::{resolve_references, EntryTable, RawEntry};
        let table = EntryTable::from_records(["b", "a"].map(|h| RawEntry {
            headword: h.into(),
            gloss: format!("{h}义"),
        }));
        let (resolved, _) = resolve_references(&table);
        let (index, worklist) = build_index(&resolved);
        assert_eq!(index, BTreeMap::from([("a".into(), 0), ("b".into(), 1)]));
        assert_eq!(worklist[1].text, "b义");

        let (empty, list) = build_index(&ResolvedTable::default());
        assert!(empty.is_empty() && list.is_empty());
    }
}
