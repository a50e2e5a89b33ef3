//! Datasets: ordered collections of sequences loaded from text files.
//!
//! File format, one sequence per line:
//!
//! ```text
//! # comment
//! p0: e (c a f) d b e d
//! p1: c a d b e d
//! ```
//!
//! The `id:` prefix is optional; sequences without one get `s<index>`.
//! Blank lines and `#` comment lines are skipped.

use std::collections::HashSet;
use std::path::Path;

use super::{parse_sequence, Error, Item, Sequence};

/// An ordered list of sequences with unique ids and a derived alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    sequences: Vec<Sequence>,
    alphabet: Vec<Item>,
}

impl Dataset {
    /// Build a dataset, auto-assigning `s<index>` ids to unlabeled
    /// sequences and rejecting duplicate ids.
    pub fn new(sequences: Vec<Sequence>) -> Result<Self, Error> {
        let mut labeled = Vec::with_capacity(sequences.len());
        for (i, s) in sequences.into_iter().enumerate() {
            labeled.push(match s.id() {
                Some(_) => s,
                None => s.named(format!("s{i}"))?,
            });
        }
        let mut seen = HashSet::new();
        for s in &labeled {
            let id = s.id().expect("all sequences labeled");
            if !seen.insert(id.to_owned()) {
                return Err(Error::DuplicateId(id.to_owned()));
            }
        }
        let mut alphabet: Vec<Item> = labeled
            .iter()
            .flat_map(|s| s.itemsets())
            .flat_map(|set| set.iter().cloned())
            .collect();
        alphabet.sort();
        alphabet.dedup();
        Ok(Dataset {
            sequences: labeled,
            alphabet,
        })
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    /// Number of sequences.
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    /// All items occurring in the dataset, sorted.
    pub fn alphabet(&self) -> &[Item] {
        &self.alphabet
    }
}

/// Errors from loading a dataset file.
#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Line { line: usize, source: Error },
    #[error(transparent)]
    Invalid(Error),
    #[error("dataset contains no sequences")]
    Empty,
}

/// Parse dataset text (see the module docs for the format).
pub fn parse_dataset(text: &str) -> Result<Dataset, DatasetError> {
    let mut sequences = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at_line = |source: Error| DatasetError::Line { line: lineno, source };
        let (id, body) = split_id(line);
        let seq = parse_sequence(body).map_err(at_line)?;
        let seq = match id {
            Some(id) => {
                if !seen.insert(id.to_owned()) {
                    return Err(at_line(Error::DuplicateId(id.to_owned())));
                }
                seq.named(id).map_err(at_line)?
            }
            None => seq,
        };
        sequences.push(seq);
    }
    if sequences.is_empty() {
        return Err(DatasetError::Empty);
    }
    Dataset::new(sequences).map_err(DatasetError::Invalid)
}

/// Load a dataset from a file.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset, DatasetError> {
    let text = std::fs::read_to_string(path)?;
    parse_dataset(&text)
}

fn split_id(line: &str) -> (Option<&str>, &str) {
    let first = line.split_whitespace().next().unwrap_or("");
    match first.strip_suffix(':') {
        Some(id) => {
            let rest = &line[line.find(first).expect("token comes from line") + first.len()..];
            (Some(id), rest)
        }
        None => (None, line),
    }
}
