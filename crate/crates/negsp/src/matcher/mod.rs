//! Containment of patterns with negation in sequences.
//!
//! The three semantic dimensions are evaluated exactly as configured:
//! non-inclusion decides how a negated itemset is tested against an itemset,
//! embedding decides whether the test applies to each gap itemset or to
//! their union, and occurrence decides how multiple embeddings of the
//! positive part are aggregated. Everything here is a pure function over
//! immutable inputs; [`support`] may evaluate sequences in parallel and is
//! deterministic either way.

pub(crate) mod engine;

use std::fmt;

use thiserror::Error;

use crate::core::{Dataset, EmbeddingMode, Itemset, NegativePattern, NonInclusion, Sequence, SemanticsConfig};
use crate::exec::maybe_par_map;

/// Positions (1-based, strictly increasing) at which the positive itemsets
/// of a pattern are anchored in a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding(Vec<usize>);

impl Embedding {
    pub fn new(positions: Vec<usize>) -> Result<Self, MatchError> {
        if positions.is_empty() || positions[0] == 0 || positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MatchError::NotIncreasing);
        }
        Ok(Embedding(positions))
    }

    fn from_internal(e: &[usize]) -> Self {
        Embedding(e.iter().map(|&j| j + 1).collect())
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    /// First and last anchor position.
    pub fn extent(&self) -> (usize, usize) {
        (self.0[0], *self.0.last().expect("embeddings are non-empty"))
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("embedding positions must be 1-based and strictly increasing")]
    NotIncreasing,
    #[error("embedding has {got} positions but the pattern has {expected} positive itemsets")]
    LengthMismatch { expected: usize, got: usize },
    #[error("embedding position {pos} is out of range 1..={len}")]
    OutOfRange { pos: usize, len: usize },
    #[error("itemset at position {pos} does not contain the pattern's positive itemset")]
    AnchorMismatch { pos: usize },
}

/// Verdict of one containment test.
///
/// `witness` is the lexicographically smallest satisfying embedding when the
/// pattern is contained; `violating` is the smallest offending embedding when
/// a strong-mode test fails because of one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchReport {
    pub contained: bool,
    pub witness: Option<Embedding>,
    pub violating: Option<Embedding>,
}

/// All embeddings of the pattern's positive part, in lexicographic order.
pub fn positive_embeddings(s: &Sequence, p: &NegativePattern) -> Vec<Embedding> {
    engine::collect_embeddings(s.itemsets(), p.positives())
        .iter()
        .map(|e| Embedding::from_internal(e))
        .collect()
}

/// The embeddings whose extent strictly contains no other embedding's extent.
pub fn minimal_embeddings(s: &Sequence, p: &NegativePattern) -> Vec<Embedding> {
    let embeddings = engine::collect_embeddings(s.itemsets(), p.positives());
    engine::minimal_indices(&embeddings)
        .into_iter()
        .map(|i| Embedding::from_internal(&embeddings[i]))
        .collect()
}

/// Non-inclusion of `q` in `i`: partial means some item of `q` is missing
/// from `i`, total means `q` and `i` are disjoint.
pub fn non_inclusion(q: &Itemset, i: &Itemset, mode: NonInclusion) -> bool {
    engine::non_incl(q, i, mode)
}

/// Do the negation constraints of `p` hold along the positive embedding `e`?
///
/// Fails with a [`MatchError`] when `e` is not a positive embedding of `p`
/// in `s`.
pub fn embedding_satisfies(
    s: &Sequence,
    p: &NegativePattern,
    e: &Embedding,
    non_inclusion: NonInclusion,
    embedding: EmbeddingMode,
) -> Result<bool, MatchError> {
    let positions = validate_embedding(s, p, e)?;
    Ok(engine::embedding_ok(
        s.itemsets(),
        p.negatives(),
        &positions,
        non_inclusion,
        embedding,
    ))
}

fn validate_embedding(s: &Sequence, p: &NegativePattern, e: &Embedding) -> Result<Vec<usize>, MatchError> {
    let positions = e.positions();
    if positions.len() != p.positive_len() {
        return Err(MatchError::LengthMismatch {
            expected: p.positive_len(),
            got: positions.len(),
        });
    }
    let mut internal = Vec::with_capacity(positions.len());
    for (k, &pos) in positions.iter().enumerate() {
        if pos == 0 || pos > s.len() {
            return Err(MatchError::OutOfRange { pos, len: s.len() });
        }
        if !p.positives()[k].is_subset_of(&s.itemsets()[pos - 1]) {
            return Err(MatchError::AnchorMismatch { pos });
        }
        internal.push(pos - 1);
    }
    Ok(internal)
}

/// Is `p` contained in `s` under the semantics `cfg`?
pub fn contains(s: &Sequence, p: &NegativePattern, cfg: SemanticsConfig) -> MatchReport {
    let outcome = engine::contains_impl(s.itemsets(), p.positives(), p.negatives(), cfg);
    MatchReport {
        contained: outcome.contained,
        witness: outcome.witness.as_deref().map(Embedding::from_internal),
        violating: outcome.violating.as_deref().map(Embedding::from_internal),
    }
}

/// Support of a pattern in a dataset: how many sequences contain it, and
/// which (ids in dataset order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    pub count: usize,
    pub ids: Vec<String>,
}

/// Count the sequences of `d` containing `p` under `cfg`.
///
/// Runs in parallel with the `parallel` feature; results are identical to
/// [`support_sequential`].
pub fn support(d: &Dataset, p: &NegativePattern, cfg: SemanticsConfig) -> Support {
    support_inner(d, p, cfg, true)
}

/// Single-threaded [`support`].
pub fn support_sequential(d: &Dataset, p: &NegativePattern, cfg: SemanticsConfig) -> Support {
    support_inner(d, p, cfg, false)
}

fn support_inner(d: &Dataset, p: &NegativePattern, cfg: SemanticsConfig, parallel: bool) -> Support {
    let verdicts = maybe_par_map(parallel, d.sequences(), |s| {
        engine::contains_impl(s.itemsets(), p.positives(), p.negatives(), cfg).contained
    });
    let ids: Vec<String> = d
        .sequences()
        .iter()
        .zip(&verdicts)
        .filter(|(_, &hit)| hit)
        .map(|(s, _)| s.id().unwrap_or_default().to_owned())
        .collect();
    Support {
        count: ids.len(),
        ids,
    }
}
