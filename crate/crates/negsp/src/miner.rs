//! Frequent pattern mining under a chosen semantics.
//!
//! [`mine_positive`] is a depth-first prefix-growth miner (sequence- and
//! itemset-extensions, antimonotone pruning). [`mine_negative`] fills the
//! negation slots of every frequent positive pattern with non-empty subsets
//! of the frequent items and counts each candidate exhaustively; there is no
//! pruning on the negated side, since the support direction there depends on
//! the semantics. [`brute_force_mine`] is the reference miner: it enumerates the
//! whole candidate language over the alphabet, counts every candidate, and
//! keeps whatever is frequent; agreement with it is the completeness check
//! for the grown miner.
//!
//! Datasets over at most 64 distinct items are compiled to `u64` bitmasks;
//! larger alphabets run the same code over plain itemsets.

use std::collections::BTreeSet;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::core::{format_pattern, Dataset, Item, Itemset, NegativePattern, SemanticsConfig};
use crate::exec::maybe_par_map;
use crate::matcher::engine::{is_contained, SetOps};

/// Thresholds and caps for one mining run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinerConfig {
    /// Absolute support threshold, at least 1.
    pub minsup: usize,
    /// Maximum number of positive itemsets.
    pub max_positive_len: usize,
    /// Maximum number of items per positive itemset.
    pub max_itemset_size: usize,
    /// Maximum number of items per negated itemset; 0 disables negations.
    pub max_negation_size: usize,
    /// Containment relation used for support counting.
    pub semantics: SemanticsConfig,
}

impl MinerConfig {
    fn validate(&self) -> Result<(), MinerError> {
        if self.minsup == 0 || self.max_positive_len == 0 || self.max_itemset_size == 0 {
            return Err(MinerError::InvalidConfig);
        }
        Ok(())
    }
}

/// A frequent pattern with its exact support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinedPattern {
    pub pattern: NegativePattern,
    pub support: usize,
    /// Ids of the matching sequences, in dataset order.
    pub ids: Vec<String>,
}

impl Serialize for MinedPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("MinedPattern", 3)?;
        s.serialize_field("pattern", &format_pattern(&self.pattern))?;
        s.serialize_field("support", &self.support)?;
        s.serialize_field("ids", &self.ids)?;
        s.end()
    }
}

/// Tab-separated lines `pattern<TAB>support<TAB>id,id,...` in canonical order.
pub fn to_tsv(results: &[MinedPattern]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format_pattern(&r.pattern));
        out.push('\t');
        out.push_str(&r.support.to_string());
        out.push('\t');
        out.push_str(&r.ids.join(","));
        out.push('\n');
    }
    out
}

/// JSON array of `{pattern, support, ids}` objects in canonical order.
pub fn to_json(results: &[MinedPattern]) -> String {
    serde_json::to_string_pretty(results).expect("mined patterns serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinerError {
    #[error("minsup, max_positive_len and max_itemset_size must be at least 1")]
    InvalidConfig,
    #[error("enumeration budget exceeded: {candidates} candidates, budget {budget}")]
    BudgetExceeded { candidates: u128, budget: usize },
}

/// Items occurring in at least `minsup` sequences, sorted.
pub fn frequent_items(d: &Dataset, minsup: usize) -> Vec<Item> {
    d.alphabet()
        .iter()
        .filter(|item| {
            d.sequences()
                .iter()
                .filter(|s| s.itemsets().iter().any(|set| set.contains(item)))
                .count()
                >= minsup
        })
        .cloned()
        .collect()
}

/// All ways of filling one or more negation slots of a positive pattern with
/// non-empty subsets of `frequent_items` of size at most
/// `cfg.max_negation_size`. The negation slots of `p` itself must be empty.
pub fn generate_negation_candidates(
    p: &NegativePattern,
    frequent_items: &BTreeSet<Item>,
    cfg: &MinerConfig,
) -> Vec<NegativePattern> {
    debug_assert!(p.is_positive(), "base pattern must be positive");
    let slots = p.positive_len() - 1;
    if slots == 0 || cfg.max_negation_size == 0 {
        return Vec::new();
    }
    let universe: Vec<&Item> = frequent_items.iter().collect();
    let vocab: Vec<Itemset> = index_subsets(universe.len(), cfg.max_negation_size)
        .into_iter()
        .map(|combo| Itemset::new(combo.into_iter().map(|i| universe[i].clone())))
        .collect();
    let mut out = Vec::new();
    for_each_filling(slots, vocab.len() + 1, |digits| {
        if digits.iter().all(|&d| d == 0) {
            return;
        }
        let negatives: Vec<Itemset> = digits
            .iter()
            .map(|&d| if d == 0 { Itemset::empty() } else { vocab[d - 1].clone() })
            .collect();
        out.push(NegativePattern::new(p.positives().to_vec(), negatives).expect("valid shape by construction"));
    });
    out
}

/// Mine the frequent positive patterns by depth-first prefix growth.
pub fn mine_positive(d: &Dataset, cfg: &MinerConfig) -> Result<Vec<MinedPattern>, MinerError> {
    cfg.validate()?;
    Ok(match Compiled::of(d) {
        Compiled::Masks(space) => space.materialize(space.mine_positive(cfg)),
        Compiled::Plain(space) => space.materialize(space.mine_positive(cfg)),
    })
}

/// Mine the frequent patterns, with and without negation, under
/// `cfg.semantics`. Parallel with the `parallel` feature; the result is the
/// same as [`mine_negative_sequential`].
pub fn mine_negative(d: &Dataset, cfg: &MinerConfig) -> Result<Vec<MinedPattern>, MinerError> {
    mine_negative_inner(d, cfg, true)
}

/// Single-threaded [`mine_negative`].
pub fn mine_negative_sequential(d: &Dataset, cfg: &MinerConfig) -> Result<Vec<MinedPattern>, MinerError> {
    mine_negative_inner(d, cfg, false)
}

fn mine_negative_inner(d: &Dataset, cfg: &MinerConfig, parallel: bool) -> Result<Vec<MinedPattern>, MinerError> {
    cfg.validate()?;
    Ok(match Compiled::of(d) {
        Compiled::Masks(space) => space.materialize(space.mine_negative(cfg, parallel)),
        Compiled::Plain(space) => space.materialize(space.mine_negative(cfg, parallel)),
    })
}

/// Enumerate every syntactically valid pattern within the caps (negated
/// itemsets drawn from the frequent items), count each one, and keep the
/// frequent ones. Errors out if the candidate count exceeds `budget`.
pub fn brute_force_mine(d: &Dataset, cfg: &MinerConfig, budget: usize) -> Result<Vec<MinedPattern>, MinerError> {
    brute_force_inner(d, cfg, budget, true)
}

/// Single-threaded [`brute_force_mine`].
pub fn brute_force_mine_sequential(
    d: &Dataset,
    cfg: &MinerConfig,
    budget: usize,
) -> Result<Vec<MinedPattern>, MinerError> {
    brute_force_inner(d, cfg, budget, false)
}

fn brute_force_inner(d: &Dataset, cfg: &MinerConfig, budget: usize, parallel: bool) -> Result<Vec<MinedPattern>, MinerError> {
    cfg.validate()?;
    Ok(match Compiled::of(d) {
        Compiled::Masks(space) => space.materialize(space.brute_force(cfg, budget, parallel)?),
        Compiled::Plain(space) => space.materialize(space.brute_force(cfg, budget, parallel)?),
    })
}

// ---------------------------------------------------------------------------
// Internal mining space, generic over the itemset representation.

trait Atom: SetOps + PartialEq + Send + Sync {
    fn decode(&self, alphabet: &[Item]) -> Itemset;
}

impl Atom for u64 {
    fn decode(&self, alphabet: &[Item]) -> Itemset {
        Itemset::new((0..64).filter(|b| self >> b & 1 == 1).map(|b| alphabet[b].clone()))
    }
}

impl Atom for Itemset {
    fn decode(&self, _alphabet: &[Item]) -> Itemset {
        self.clone()
    }
}

struct Space<T> {
    alphabet: Vec<Item>,
    /// Singleton itemset per alphabet item, same order as `alphabet`.
    atoms: Vec<T>,
    seqs: Vec<Vec<T>>,
    ids: Vec<String>,
}

enum Compiled {
    Masks(Space<u64>),
    Plain(Space<Itemset>),
}

/// A pattern candidate with its support, still in compiled form.
struct RawMined<T> {
    positives: Vec<T>,
    negatives: Vec<T>,
    seq_indices: Vec<u32>,
}

impl Compiled {
    fn of(d: &Dataset) -> Compiled {
        let alphabet: Vec<Item> = d.alphabet().to_vec();
        let ids: Vec<String> = d.sequences().iter().map(|s| s.id().unwrap_or_default().to_owned()).collect();
        if alphabet.len() <= 64 {
            let bit_of = |item: &Item| alphabet.binary_search(item).expect("item in alphabet");
            let seqs = d
                .sequences()
                .iter()
                .map(|s| {
                    s.itemsets()
                        .iter()
                        .map(|set| set.iter().fold(0u64, |m, item| m | 1 << bit_of(item)))
                        .collect()
                })
                .collect();
            let atoms = (0..alphabet.len()).map(|b| 1u64 << b).collect();
            Compiled::Masks(Space {
                alphabet,
                atoms,
                seqs,
                ids,
            })
        } else {
            let atoms = alphabet.iter().map(|item| Itemset::new([item.clone()])).collect();
            let seqs = d.sequences().iter().map(|s| s.itemsets().to_vec()).collect();
            Compiled::Plain(Space {
                alphabet,
                atoms,
                seqs,
                ids,
            })
        }
    }
}

impl<T: Atom> Space<T> {
    fn materialize(&self, mut raw: Vec<RawMined<T>>) -> Vec<MinedPattern> {
        let mut out: Vec<MinedPattern> = raw
            .drain(..)
            .map(|r| {
                let positives = r.positives.iter().map(|t| t.decode(&self.alphabet)).collect();
                let negatives = r.negatives.iter().map(|t| t.decode(&self.alphabet)).collect();
                let pattern = NegativePattern::new(positives, negatives).expect("mined patterns are well-formed");
                let ids = r.seq_indices.iter().map(|&i| self.ids[i as usize].clone()).collect();
                MinedPattern {
                    pattern,
                    support: r.seq_indices.len(),
                    ids,
                }
            })
            .collect();
        out.sort_by_cached_key(|m| (m.pattern.positive_len(), format_pattern(&m.pattern)));
        out
    }

    /// Indices of the alphabet items occurring in at least `minsup` sequences.
    fn frequent_atoms(&self, minsup: usize) -> Vec<usize> {
        (0..self.atoms.len())
            .filter(|&a| {
                self.seqs
                    .iter()
                    .filter(|seq| seq.iter().any(|set| self.atoms[a].subset_of(set)))
                    .count()
                    >= minsup
            })
            .collect()
    }

    fn supporting(&self, positives: &[T], among: &[u32]) -> Vec<u32> {
        among
            .iter()
            .copied()
            .filter(|&i| contains_positive(&self.seqs[i as usize], positives))
            .collect()
    }

    fn mine_positive(&self, cfg: &MinerConfig) -> Vec<RawMined<T>> {
        let freq = self.frequent_atoms(cfg.minsup);
        let all: Vec<u32> = (0..self.seqs.len() as u32).collect();
        let mut out = Vec::new();
        for &a in &freq {
            let pattern = vec![self.atoms[a].clone()];
            let ids = self.supporting(&pattern, &all);
            if ids.len() >= cfg.minsup {
                self.grow(cfg, &freq, pattern, a, 1, ids, &mut out);
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        &self,
        cfg: &MinerConfig,
        freq: &[usize],
        pattern: Vec<T>,
        last_atom: usize,
        last_size: usize,
        ids: Vec<u32>,
        out: &mut Vec<RawMined<T>>,
    ) {
        out.push(RawMined {
            positives: pattern.clone(),
            negatives: vec![T::empty_set(); pattern.len() - 1],
            seq_indices: ids.clone(),
        });
        // itemset-extension: add a larger item to the last itemset
        if last_size < cfg.max_itemset_size {
            for &a in freq.iter().filter(|&&a| a > last_atom) {
                let mut extended = pattern.clone();
                extended.last_mut().expect("pattern non-empty").union_in_place(&self.atoms[a]);
                let ids2 = self.supporting(&extended, &ids);
                if ids2.len() >= cfg.minsup {
                    self.grow(cfg, freq, extended, a, last_size + 1, ids2, out);
                }
            }
        }
        // sequence-extension: append a new singleton itemset
        if pattern.len() < cfg.max_positive_len {
            for &a in freq {
                let mut extended = pattern.clone();
                extended.push(self.atoms[a].clone());
                let ids2 = self.supporting(&extended, &ids);
                if ids2.len() >= cfg.minsup {
                    self.grow(cfg, freq, extended, a, 1, ids2, out);
                }
            }
        }
    }

    /// Non-empty unions of up to `max_size` of the given atoms, by
    /// (size, lexicographic) combination order.
    fn vocabulary(&self, atom_indices: &[usize], max_size: usize) -> Vec<T> {
        index_subsets(atom_indices.len(), max_size)
            .into_iter()
            .map(|combo| {
                let mut set = T::empty_set();
                for i in combo {
                    set.union_in_place(&self.atoms[atom_indices[i]]);
                }
                set
            })
            .collect()
    }

    fn mine_negative(&self, cfg: &MinerConfig, parallel: bool) -> Vec<RawMined<T>> {
        let bases = self.mine_positive(cfg);
        let vocab = self.vocabulary(&self.frequent_atoms(cfg.minsup), cfg.max_negation_size);
        let results = maybe_par_map(parallel, &bases, |base| {
            let mut local = Vec::new();
            let slots = base.positives.len() - 1;
            if slots == 0 || vocab.is_empty() {
                return local;
            }
            let mut negatives: Vec<T> = Vec::with_capacity(slots);
            let mut hits: Vec<u32> = Vec::with_capacity(base.seq_indices.len());
            for_each_filling(slots, vocab.len() + 1, |digits| {
                if digits.iter().all(|&d| d == 0) {
                    return;
                }
                negatives.clear();
                negatives.extend(
                    digits
                        .iter()
                        .map(|&d| if d == 0 { T::empty_set() } else { vocab[d - 1].clone() }),
                );
                // a match needs an embedding of the positive part, so only
                // the base's supporting sequences can qualify
                hits.clear();
                hits.extend(base.seq_indices.iter().copied().filter(|&i| {
                    is_contained(&self.seqs[i as usize], &base.positives, &negatives, cfg.semantics)
                }));
                if hits.len() >= cfg.minsup {
                    local.push(RawMined {
                        positives: base.positives.clone(),
                        negatives: negatives.clone(),
                        seq_indices: hits.clone(),
                    });
                }
            });
            local
        });
        let mut out = bases;
        out.extend(results.into_iter().flatten());
        out
    }

    fn brute_force(&self, cfg: &MinerConfig, budget: usize, parallel: bool) -> Result<Vec<RawMined<T>>, MinerError> {
        let n = self.atoms.len();
        let itemset_count = count_subsets(n, cfg.max_itemset_size);
        let vocab_atoms = self.frequent_atoms(cfg.minsup);
        let vocab_count = count_subsets(vocab_atoms.len(), cfg.max_negation_size);
        let mut candidates: u128 = 0;
        for len in 1..=cfg.max_positive_len {
            let skeletons = itemset_count.checked_pow(len as u32).unwrap_or(u128::MAX);
            let fillings = (vocab_count + 1).checked_pow(len as u32 - 1).unwrap_or(u128::MAX);
            candidates = candidates.saturating_add(skeletons.saturating_mul(fillings));
        }
        if candidates > budget as u128 {
            return Err(MinerError::BudgetExceeded { candidates, budget });
        }

        let all_itemsets = self.vocabulary(&(0..n).collect::<Vec<_>>(), cfg.max_itemset_size);
        let vocab = self.vocabulary(&vocab_atoms, cfg.max_negation_size);
        let mut skeletons: Vec<Vec<T>> = all_itemsets.iter().map(|s| vec![s.clone()]).collect();
        let mut frontier = skeletons.clone();
        for _ in 1..cfg.max_positive_len {
            let mut next = Vec::with_capacity(frontier.len() * all_itemsets.len());
            for skel in &frontier {
                for set in &all_itemsets {
                    let mut longer = skel.clone();
                    longer.push(set.clone());
                    next.push(longer);
                }
            }
            skeletons.extend(next.iter().cloned());
            frontier = next;
        }

        let results = maybe_par_map(parallel, &skeletons, |skel| {
            let mut local = Vec::new();
            let mut negatives: Vec<T> = Vec::with_capacity(skel.len() - 1);
            let mut hits: Vec<u32> = Vec::with_capacity(self.seqs.len());
            for_each_filling(skel.len() - 1, vocab.len() + 1, |digits| {
                negatives.clear();
                negatives.extend(
                    digits
                        .iter()
                        .map(|&d| if d == 0 { T::empty_set() } else { vocab[d - 1].clone() }),
                );
                hits.clear();
                hits.extend(
                    (0..self.seqs.len() as u32)
                        .filter(|&i| is_contained(&self.seqs[i as usize], skel, &negatives, cfg.semantics)),
                );
                if hits.len() >= cfg.minsup {
                    local.push(RawMined {
                        positives: skel.clone(),
                        negatives: negatives.clone(),
                        seq_indices: hits.clone(),
                    });
                }
            });
            local
        });
        Ok(results.into_iter().flatten().collect())
    }
}

/// Greedy subsequence test: does `seq` contain the positive pattern `pat`?
fn contains_positive<T: SetOps>(seq: &[T], pat: &[T]) -> bool {
    let mut j = 0;
    for p in pat {
        loop {
            if j == seq.len() {
                return false;
            }
            j += 1;
            if p.subset_of(&seq[j - 1]) {
                break;
            }
        }
    }
    true
}

/// All index combinations of sizes `1..=max_size` from `0..n`, ordered by
/// (size, lexicographic).
fn index_subsets(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, start: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        let need = size - cur.len();
        for i in start..=n - need {
            cur.push(i);
            rec(n, i + 1, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for size in 1..=max_size.min(n) {
        rec(n, 0, size, &mut cur, &mut out);
    }
    out
}

/// Σ C(n, k) for k in 1..=max_size.
fn count_subsets(n: usize, max_size: usize) -> u128 {
    let mut total: u128 = 0;
    for size in 1..=max_size.min(n) {
        let mut c: u128 = 1;
        for k in 0..size {
            c = c.saturating_mul((n - k) as u128) / (k as u128 + 1);
        }
        total = total.saturating_add(c);
    }
    total
}

/// Visit every assignment of `slots` digits in `0..radix`, first slot
/// fastest, starting from all zeros.
fn for_each_filling(slots: usize, radix: usize, mut f: impl FnMut(&[usize])) {
    let mut digits = vec![0usize; slots];
    loop {
        f(&digits);
        let mut k = 0;
        while k < slots {
            digits[k] += 1;
            if digits[k] < radix {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        if k == slots {
            break;
        }
    }
}

#[cfg(test)]
mod tests;
