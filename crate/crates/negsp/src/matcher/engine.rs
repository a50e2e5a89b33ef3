//! Containment engine, generic over the itemset representation.
//!
//! The public matcher instantiates it with [`Itemset`]; the miner compiles
//! small alphabets down to `u64` bitmasks and runs the exact same code.
//! Positions are 0-based here and shifted to 1-based at the API boundary.

use crate::core::{EmbeddingMode, Itemset, NonInclusion, OccurrenceMode, SemanticsConfig};

pub(crate) trait SetOps: Clone {
    fn is_empty_set(&self) -> bool;
    /// `self ⊆ sup`
    fn subset_of(&self, sup: &Self) -> bool;
    /// some item of `self` is absent from `other`
    fn partial_non_incl(&self, other: &Self) -> bool;
    /// every item of `self` is absent from `other`
    fn total_non_incl(&self, other: &Self) -> bool;
    fn empty_set() -> Self;
    fn union_in_place(&mut self, other: &Self);
}

impl SetOps for Itemset {
    fn is_empty_set(&self) -> bool {
        self.is_empty()
    }

    fn subset_of(&self, sup: &Self) -> bool {
        self.is_subset_of(sup)
    }

    fn partial_non_incl(&self, other: &Self) -> bool {
        !self.is_subset_of(other)
    }

    fn total_non_incl(&self, other: &Self) -> bool {
        self.is_disjoint_from(other)
    }

    fn empty_set() -> Self {
        Itemset::empty()
    }

    fn union_in_place(&mut self, other: &Self) {
        *self = self.union(other);
    }
}

impl SetOps for u64 {
    fn is_empty_set(&self) -> bool {
        *self == 0
    }

    fn subset_of(&self, sup: &Self) -> bool {
        self & sup == *self
    }

    fn partial_non_incl(&self, other: &Self) -> bool {
        self & !other != 0
    }

    fn total_non_incl(&self, other: &Self) -> bool {
        self & other == 0
    }

    fn empty_set() -> Self {
        0
    }

    fn union_in_place(&mut self, other: &Self) {
        *self |= other;
    }
}

pub(crate) fn non_incl<T: SetOps>(q: &T, i: &T, mode: NonInclusion) -> bool {
    match mode {
        NonInclusion::Partial => q.partial_non_incl(i),
        NonInclusion::Total => q.total_non_incl(i),
    }
}

/// Visit every embedding of `positives` in `seq` in lexicographic order.
/// The visitor returns `false` to stop early.
pub(crate) fn for_each_embedding<T: SetOps>(seq: &[T], positives: &[T], mut visit: impl FnMut(&[usize]) -> bool) {
    let m = positives.len();
    if m == 0 || m > seq.len() {
        return;
    }
    const STACK: usize = 32;
    if m <= STACK {
        let mut path = [0usize; STACK];
        descend(seq, positives, 0, 0, &mut path[..m], &mut visit);
    } else {
        let mut path = vec![0usize; m];
        descend(seq, positives, 0, 0, &mut path, &mut visit);
    }
}

fn descend<T: SetOps, F: FnMut(&[usize]) -> bool>(
    seq: &[T],
    positives: &[T],
    depth: usize,
    start: usize,
    path: &mut [usize],
    visit: &mut F,
) -> bool {
    if depth == positives.len() {
        return visit(path);
    }
    // leave room for the remaining positive itemsets
    let last = seq.len() - (positives.len() - depth);
    for j in start..=last {
        if positives[depth].subset_of(&seq[j]) {
            path[depth] = j;
            if !descend(seq, positives, depth + 1, j + 1, path, visit) {
                return false;
            }
        }
    }
    true
}

pub(crate) fn collect_embeddings<T: SetOps>(seq: &[T], positives: &[T]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_embedding(seq, positives, |e| {
        out.push(e.to_vec());
        true
    });
    out
}

/// Check the negation constraints of `emb` (0-based, already a positive
/// embedding). Empty slots and empty gap intervals are vacuously satisfied.
pub(crate) fn embedding_ok<T: SetOps>(
    seq: &[T],
    negatives: &[T],
    emb: &[usize],
    ni: NonInclusion,
    em: EmbeddingMode,
) -> bool {
    for (i, q) in negatives.iter().enumerate() {
        if q.is_empty_set() {
            continue;
        }
        let gap = emb[i] + 1..emb[i + 1];
        if gap.is_empty() {
            continue;
        }
        let ok = match em {
            EmbeddingMode::Soft => gap.clone().all(|j| non_incl(q, &seq[j], ni)),
            EmbeddingMode::Strict => {
                let mut union = T::empty_set();
                for j in gap.clone() {
                    union.union_in_place(&seq[j]);
                }
                non_incl(q, &union, ni)
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Indices of embeddings whose extent strictly contains no other embedding's
/// extent. Equal extents do not disqualify each other.
pub(crate) fn minimal_indices(embeddings: &[Vec<usize>]) -> Vec<usize> {
    let extents: Vec<(usize, usize)> = embeddings
        .iter()
        .map(|e| (e[0], *e.last().expect("embeddings are non-empty")))
        .collect();
    (0..embeddings.len())
        .filter(|&i| {
            let (a, b) = extents[i];
            !extents
                .iter()
                .any(|&(c, d)| (c, d) != (a, b) && a <= c && d <= b)
        })
        .collect()
}

/// Containment verdict only, with no report to build. Weak and strong modes
/// run allocation-free, which matters in the miner's counting loops.
pub(crate) fn is_contained<T: SetOps>(seq: &[T], positives: &[T], negatives: &[T], cfg: SemanticsConfig) -> bool {
    let (ni, em) = (cfg.non_inclusion, cfg.embedding);
    match cfg.occurrence {
        OccurrenceMode::Weak => {
            let mut found = false;
            for_each_embedding(seq, positives, |e| {
                if embedding_ok(seq, negatives, e, ni, em) {
                    found = true;
                    false
                } else {
                    true
                }
            });
            found
        }
        OccurrenceMode::Strong => {
            let mut any = false;
            let mut all_ok = true;
            for_each_embedding(seq, positives, |e| {
                any = true;
                if embedding_ok(seq, negatives, e, ni, em) {
                    true
                } else {
                    all_ok = false;
                    false
                }
            });
            any && all_ok
        }
        OccurrenceMode::StrongMinimal => contains_impl(seq, positives, negatives, cfg).contained,
    }
}

pub(crate) struct Outcome {
    pub contained: bool,
    pub witness: Option<Vec<usize>>,
    pub violating: Option<Vec<usize>>,
}

impl Outcome {
    fn absent() -> Self {
        Outcome {
            contained: false,
            witness: None,
            violating: None,
        }
    }
}

/// Evaluate containment of a pattern (split into `positives`/`negatives`)
/// under one semantics. Witnesses and violating embeddings are the
/// lexicographically smallest candidates, which keeps reports deterministic.
pub(crate) fn contains_impl<T: SetOps>(seq: &[T], positives: &[T], negatives: &[T], cfg: SemanticsConfig) -> Outcome {
    let (ni, em) = (cfg.non_inclusion, cfg.embedding);
    match cfg.occurrence {
        OccurrenceMode::Weak => {
            let mut witness = None;
            for_each_embedding(seq, positives, |e| {
                if embedding_ok(seq, negatives, e, ni, em) {
                    witness = Some(e.to_vec());
                    false
                } else {
                    true
                }
            });
            Outcome {
                contained: witness.is_some(),
                witness,
                violating: None,
            }
        }
        OccurrenceMode::Strong => {
            let mut first = None;
            let mut violating = None;
            for_each_embedding(seq, positives, |e| {
                if first.is_none() {
                    first = Some(e.to_vec());
                }
                if embedding_ok(seq, negatives, e, ni, em) {
                    true
                } else {
                    violating = Some(e.to_vec());
                    false
                }
            });
            if violating.is_some() {
                Outcome {
                    contained: false,
                    witness: None,
                    violating,
                }
            } else if first.is_some() {
                Outcome {
                    contained: true,
                    witness: first,
                    violating: None,
                }
            } else {
                Outcome::absent()
            }
        }
        OccurrenceMode::StrongMinimal => {
            let embeddings = collect_embeddings(seq, positives);
            if embeddings.is_empty() {
                return Outcome::absent();
            }
            let minimal = minimal_indices(&embeddings);
            for &i in &minimal {
                if !embedding_ok(seq, negatives, &embeddings[i], ni, em) {
                    return Outcome {
                        contained: false,
                        witness: None,
                        violating: Some(embeddings[i].clone()),
                    };
                }
            }
            Outcome {
                contained: true,
                witness: Some(embeddings[minimal[0]].clone()),
                violating: None,
            }
        }
    }
}
