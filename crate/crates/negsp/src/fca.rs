//! Formal concept analysis over binary contexts.
//!
//! A context is an objects × attributes incidence table; a concept is a
//! maximal rectangle in it: a pair (extent, intent) where each side is
//! exactly the derivation of the other. [`enumerate_concepts`] lists all
//! concepts in lectic order of their intents; [`lattice`] arranges them into
//! the covering relation of extent inclusion for DOT/JSON export.
//!
//! Intents are kept as bitmasks, which caps contexts at 128 attributes;
//! tick/no-tick questionnaire encodings use 2 per table row.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::survey::{question, QuestionId, Response};

/// Objects × attributes incidence table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    /// One attribute bitmask per object.
    rows: Vec<u128>,
}

#[derive(Debug, Error)]
pub enum FcaError {
    #[error("duplicate object id `{0}`")]
    DuplicateObject(String),
    #[error("duplicate attribute id `{0}`")]
    DuplicateAttribute(String),
    #[error("at most 128 attributes are supported, got {0}")]
    TooManyAttributes(usize),
    #[error("row {row} has {got} cells, expected {expected}")]
    RowWidth { row: usize, got: usize, expected: usize },
    #[error("row {row}: incidence cells must be 0 or 1, got `{got}`")]
    BadCell { row: usize, got: String },
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("concept budget {budget} exceeded")]
    BudgetExceeded { budget: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl BinaryContext {
    /// Build a context from boolean incidence rows (one per object).
    pub fn new(objects: Vec<String>, attributes: Vec<String>, incidence: &[Vec<bool>]) -> Result<Self, FcaError> {
        if incidence.len() != objects.len() {
            return Err(FcaError::RowWidth {
                row: incidence.len().min(objects.len()) + 1,
                got: incidence.len(),
                expected: objects.len(),
            });
        }
        let mut rows = Vec::with_capacity(objects.len());
        for (i, row) in incidence.iter().enumerate() {
            if row.len() != attributes.len() {
                return Err(FcaError::RowWidth {
                    row: i + 1,
                    got: row.len(),
                    expected: attributes.len(),
                });
            }
            rows.push(
                row.iter()
                    .enumerate()
                    .fold(0u128, |m, (a, &hit)| if hit { m | 1 << a } else { m }),
            );
        }
        Self::from_rows(objects, attributes, rows)
    }

    /// Build a context from attribute bitmasks (bit `i` = `attributes[i]`).
    pub fn from_rows(objects: Vec<String>, attributes: Vec<String>, rows: Vec<u128>) -> Result<Self, FcaError> {
        if attributes.len() > 128 {
            return Err(FcaError::TooManyAttributes(attributes.len()));
        }
        if let Some(dup) = first_duplicate(&objects) {
            return Err(FcaError::DuplicateObject(dup.clone()));
        }
        if let Some(dup) = first_duplicate(&attributes) {
            return Err(FcaError::DuplicateAttribute(dup.clone()));
        }
        debug_assert_eq!(rows.len(), objects.len());
        Ok(BinaryContext {
            objects,
            attributes,
            rows,
        })
    }

    /// Parse an incidence matrix CSV: header `,attr1,attr2,...`, one row per
    /// object with 0/1 cells.
    pub fn from_csv(text: &str) -> Result<Self, FcaError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(text.as_bytes());
        let attributes: Vec<String> = reader.headers()?.iter().skip(1).map(str::to_owned).collect();
        let mut objects = Vec::new();
        let mut incidence = Vec::new();
        for (idx, record) in reader.records().enumerate() {
            let record = record?;
            let row = idx + 2;
            if record.len() != attributes.len() + 1 {
                return Err(FcaError::RowWidth {
                    row,
                    got: record.len().saturating_sub(1),
                    expected: attributes.len(),
                });
            }
            objects.push(record[0].to_owned());
            let mut cells = Vec::with_capacity(attributes.len());
            for cell in record.iter().skip(1) {
                cells.push(match cell {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(FcaError::BadCell {
                            row,
                            got: other.to_owned(),
                        })
                    }
                });
            }
            incidence.push(cells);
        }
        Self::new(objects, attributes, &incidence)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn incident(&self, object: usize, attribute: usize) -> bool {
        self.rows[object] >> attribute & 1 == 1
    }

    fn attribute_mask(&self, attrs: &BTreeSet<String>) -> Result<u128, FcaError> {
        let mut mask = 0u128;
        for name in attrs {
            let idx = self
                .attributes
                .iter()
                .position(|a| a == name)
                .ok_or_else(|| FcaError::UnknownAttribute(name.clone()))?;
            mask |= 1 << idx;
        }
        Ok(mask)
    }

    fn full_mask(&self) -> u128 {
        if self.attributes.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.attributes.len()) - 1
        }
    }

    /// Attributes common to all objects that have every attribute in `mask`.
    fn close(&self, mask: u128) -> u128 {
        let mut intent = self.full_mask();
        for &row in &self.rows {
            if row & mask == mask {
                intent &= row;
            }
        }
        intent
    }

    fn extent_of(&self, intent: u128) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i] & intent == intent).collect()
    }

    fn unmask(&self, mask: u128) -> Vec<usize> {
        (0..self.attributes.len()).filter(|&a| mask >> a & 1 == 1).collect()
    }
}

/// Quadratic duplicate scan; id lists are short and this avoids building a
/// set on every context construction.
fn first_duplicate(ids: &[String]) -> Option<&String> {
    for (i, id) in ids.iter().enumerate() {
        if ids[..i].contains(id) {
            return Some(id);
        }
    }
    None
}

/// Attributes shared by every object that has all of `attrs` (the double
/// derivation). The result contains `attrs` and is idempotent.
pub fn closure(attrs: &BTreeSet<String>, ctx: &BinaryContext) -> Result<BTreeSet<String>, FcaError> {
    let mask = ctx.attribute_mask(attrs)?;
    let closed = ctx.close(mask);
    Ok(ctx.unmask(closed).into_iter().map(|a| ctx.attributes[a].clone()).collect())
}

/// A formal concept: extent and intent index its context's objects and
/// attributes (ascending).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub extent: Vec<usize>,
    pub intent: Vec<usize>,
}

impl Concept {
    pub fn extent_ids<'a>(&self, ctx: &'a BinaryContext) -> Vec<&'a str> {
        self.extent.iter().map(|&i| ctx.objects()[i].as_str()).collect()
    }

    pub fn intent_ids<'a>(&self, ctx: &'a BinaryContext) -> Vec<&'a str> {
        self.intent.iter().map(|&a| ctx.attributes()[a].as_str()).collect()
    }
}

/// All concepts of the context, in lectic order of their intents.
///
/// Fails once more than `budget` concepts have been produced.
pub fn enumerate_concepts(ctx: &BinaryContext, budget: usize) -> Result<Vec<Concept>, FcaError> {
    let m = ctx.attributes.len();
    let mut out = Vec::with_capacity(16);
    let mut intent = ctx.close(0);
    loop {
        if out.len() >= budget {
            return Err(FcaError::BudgetExceeded { budget });
        }
        out.push(Concept {
            extent: ctx.extent_of(intent),
            intent: ctx.unmask(intent),
        });
        match next_closure(ctx, intent, m) {
            Some(next) => intent = next,
            None => break,
        }
    }
    Ok(out)
}

/// The lectically next closed intent after `a`, if any.
fn next_closure(ctx: &BinaryContext, a: u128, m: usize) -> Option<u128> {
    let mut a = a;
    for i in (0..m).rev() {
        let bit = 1u128 << i;
        if a & bit != 0 {
            a &= !bit;
        } else {
            let closed = ctx.close(a | bit);
            // valid successor iff it adds no attribute below i
            if closed & (bit - 1) & !a == 0 {
                return Some(closed);
            }
        }
    }
    None
}

/// Concepts plus the covering relation of extent inclusion. Edges point from
/// the larger-extent concept (parent) to the covered one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub concepts: Vec<Concept>,
    pub edges: Vec<(usize, usize)>,
}

/// Compute the covering edges (transitive reduction of extent inclusion)
/// over a complete concept set.
pub fn lattice(concepts: &[Concept]) -> Lattice {
    let n = concepts.len();
    let words = concepts
        .iter()
        .flat_map(|c| c.extent.iter().copied().max())
        .max()
        .map_or(1, |hi| hi / 64 + 1);
    let sets: Vec<Vec<u64>> = concepts
        .iter()
        .map(|c| {
            let mut bits = vec![0u64; words];
            for &o in &c.extent {
                bits[o / 64] |= 1 << (o % 64);
            }
            bits
        })
        .collect();
    let proper_subset = |a: usize, b: usize| -> bool {
        // extent(a) ⊂ extent(b)
        sets[a] != sets[b] && sets[a].iter().zip(&sets[b]).all(|(x, y)| x & !y == 0)
    };
    let mut edges = Vec::new();
    for parent in 0..n {
        for child in 0..n {
            if proper_subset(child, parent)
                && !(0..n).any(|w| proper_subset(child, w) && proper_subset(w, parent))
            {
                edges.push((parent, child));
            }
        }
    }
    Lattice {
        concepts: concepts.to_vec(),
        edges,
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT rendering: one box per concept labeled with its intent and extent
/// size, edges from covering concept to covered.
pub fn lattice_dot(lat: &Lattice, ctx: &BinaryContext) -> String {
    let mut out = String::from("digraph concepts {\n  node [shape=box];\n");
    for (i, c) in lat.concepts.iter().enumerate() {
        let intent = c.intent_ids(ctx).join(", ");
        out.push_str(&format!(
            "  c{} [label=\"{{{}}}\\n#{}\"];\n",
            i,
            dot_escape(&intent),
            c.extent.len()
        ));
    }
    for (parent, child) in &lat.edges {
        out.push_str(&format!("  c{parent} -> c{child};\n"));
    }
    out.push_str("}\n");
    out
}

/// JSON rendering: `{"concepts": [...], "edges": [[parent, child], ...]}`.
pub fn lattice_json(lat: &Lattice, ctx: &BinaryContext) -> String {
    let concepts: Vec<serde_json::Value> = lat
        .concepts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            serde_json::json!({
                "id": i,
                "extent": c.extent_ids(ctx),
                "intent": c.intent_ids(ctx),
                "extent_size": c.extent.len(),
            })
        })
        .collect();
    let value = serde_json::json!({
        "objects": ctx.objects(),
        "attributes": ctx.attributes(),
        "concepts": concepts,
        "edges": lat.edges.iter().map(|&(p, c)| vec![p, c]).collect::<Vec<_>>(),
    });
    serde_json::to_string_pretty(&value).expect("lattice serializes")
}

/// Encode one question's answers as a context: per table sequence `x`, a
/// positive attribute `x` (ticked) and a negative attribute `nx` (not
/// ticked). Participants missing the question count as all-unticked.
pub fn context_from_responses(responses: &[Response], question_id: QuestionId) -> BinaryContext {
    let q = question(question_id);
    let row_ids: Vec<String> = q.sequence_ids().iter().map(|s| (*s).to_owned()).collect();
    let mut attributes: Vec<String> = row_ids.clone();
    attributes.extend(row_ids.iter().map(|id| format!("n{id}")));
    let objects: Vec<String> = responses.iter().map(|r| r.participant.clone()).collect();
    let empty = BTreeSet::new();
    let rows: Vec<u128> = responses
        .iter()
        .map(|r| {
            let ticks = r.ticks.get(&question_id).unwrap_or(&empty);
            row_ids.iter().enumerate().fold(0u128, |mask, (i, id)| {
                if ticks.contains(id) {
                    mask | 1 << i
                } else {
                    mask | 1 << (i + row_ids.len())
                }
            })
        })
        .collect();
    BinaryContext::from_rows(objects, attributes, rows).expect("response contexts are well-formed")
}

#[cfg(test)]
mod tests;
