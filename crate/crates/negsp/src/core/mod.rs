//! Domain types: items, itemsets, sequences, datasets, patterns with
//! negation, and the semantics configuration triple.
//!
//! All values are immutable after construction and safe to share across
//! threads. Formatting is canonical (items in lexicographic order), so
//! `parse(format(x)) == x` for every valid value.

mod dataset;
mod parse;

pub use dataset::{load_dataset, parse_dataset, Dataset, DatasetError};
pub use parse::{format_pattern, format_sequence, parse_pattern, parse_sequence};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Errors from constructing or parsing domain values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("invalid item token `{0}`")]
    InvalidToken(String),
    #[error("unbalanced parentheses")]
    UnbalancedParens,
    #[error("nested itemset group")]
    NestedGroup,
    #[error("empty itemset group `()`")]
    EmptyGroup,
    #[error("`!` must be immediately followed by an item or an itemset group")]
    DanglingNegation,
    #[error("pattern cannot start with a negated itemset")]
    LeadingNegation,
    #[error("pattern cannot end with a negated itemset")]
    TrailingNegation,
    #[error("two consecutive negated itemsets")]
    ConsecutiveNegations,
    #[error("negated itemset not allowed in a sequence")]
    NegationInSequence,
    #[error("sequence itemsets must be non-empty")]
    EmptyItemset,
    #[error("pattern has no positive itemsets")]
    NoPositives,
    #[error("positive itemsets must be non-empty")]
    EmptyPositive,
    #[error("pattern with {positives} positive itemsets needs {expected} negation slots, got {got}")]
    NegationSlots {
        positives: usize,
        expected: usize,
        got: usize,
    },
    #[error("duplicate sequence id `{0}`")]
    DuplicateId(String),
    #[error("invalid sequence id `{0}`")]
    InvalidId(String),
}

/// A single event symbol: a non-empty ASCII token of letters, digits and `_`.
///
/// Items are case-sensitive opaque tokens and order lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item(String);

impl Item {
    pub fn new(name: impl Into<String>) -> Result<Self, Error> {
        let name = name.into();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::InvalidToken(name));
        }
        Ok(Item(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Item {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Item::new(s)
    }
}

/// An unordered, duplicate-free set of items.
///
/// Stored sorted, which makes iteration order canonical and subset tests a
/// linear merge walk.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Itemset {
    items: Vec<Item>,
}

impl Itemset {
    pub fn new(items: impl IntoIterator<Item = Item>) -> Self {
        let mut items: Vec<Item> = items.into_iter().collect();
        items.sort();
        items.dedup();
        Itemset { items }
    }

    pub const fn empty() -> Self {
        Itemset { items: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Items in lexicographic order.
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Item> {
        self.items.iter()
    }

    pub fn contains(&self, item: &Item) -> bool {
        self.items.binary_search(item).is_ok()
    }

    /// True when every item of `self` occurs in `sup`.
    pub fn is_subset_of(&self, sup: &Itemset) -> bool {
        let mut rest = sup.items.as_slice();
        for item in &self.items {
            match rest.iter().position(|x| x >= item) {
                Some(k) if rest[k] == *item => rest = &rest[k + 1..],
                _ => return false,
            }
        }
        true
    }

    /// True when `self` and `other` share no item.
    pub fn is_disjoint_from(&self, other: &Itemset) -> bool {
        let (mut a, mut b) = (self.items.as_slice(), other.items.as_slice());
        while let (Some(x), Some(y)) = (a.first(), b.first()) {
            match x.cmp(y) {
                std::cmp::Ordering::Less => a = &a[1..],
                std::cmp::Ordering::Greater => b = &b[1..],
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Itemset) -> Itemset {
        Itemset::new(self.items.iter().chain(other.items.iter()).cloned())
    }
}

impl FromIterator<Item> for Itemset {
    fn from_iter<I: IntoIterator<Item = Item>>(iter: I) -> Self {
        Itemset::new(iter)
    }
}

impl<'a> IntoIterator for &'a Itemset {
    type Item = &'a Item;
    type IntoIter = std::slice::Iter<'a, Item>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// An ordered list of non-empty itemsets, optionally labeled with an id.
///
/// Positions are 1-based in every user-facing report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    id: Option<String>,
    itemsets: Vec<Itemset>,
}

impl Sequence {
    pub fn new(itemsets: Vec<Itemset>) -> Result<Self, Error> {
        if itemsets.iter().any(Itemset::is_empty) {
            return Err(Error::EmptyItemset);
        }
        Ok(Sequence { id: None, itemsets })
    }

    pub fn with_id(id: impl Into<String>, itemsets: Vec<Itemset>) -> Result<Self, Error> {
        let mut s = Sequence::new(itemsets)?;
        s.id = Some(validate_id(id.into())?);
        Ok(s)
    }

    /// Same sequence relabeled with `id`.
    pub fn named(mut self, id: impl Into<String>) -> Result<Self, Error> {
        self.id = Some(validate_id(id.into())?);
        Ok(self)
    }

    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    pub fn itemsets(&self) -> &[Itemset] {
        &self.itemsets
    }

    /// Number of itemsets.
    pub fn len(&self) -> usize {
        self.itemsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.itemsets.is_empty()
    }
}

fn validate_id(id: String) -> Result<String, Error> {
    if id.is_empty() || id.chars().any(|c| c.is_whitespace() || "()!,:#".contains(c)) {
        return Err(Error::InvalidId(id));
    }
    Ok(id)
}

/// A sequential pattern with negation: positive itemsets `p1..pn` and one
/// negation slot between each consecutive pair (`q1..q(n-1)`, possibly empty).
///
/// An empty slot means "no negation there"; slots before the first or after
/// the last positive itemset do not exist, and each positive itemset is
/// non-empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NegativePattern {
    positives: Vec<Itemset>,
    negatives: Vec<Itemset>,
}

impl NegativePattern {
    pub fn new(positives: Vec<Itemset>, negatives: Vec<Itemset>) -> Result<Self, Error> {
        if positives.is_empty() {
            return Err(Error::NoPositives);
        }
        if positives.iter().any(Itemset::is_empty) {
            return Err(Error::EmptyPositive);
        }
        if negatives.len() != positives.len() - 1 {
            return Err(Error::NegationSlots {
                positives: positives.len(),
                expected: positives.len() - 1,
                got: negatives.len(),
            });
        }
        Ok(NegativePattern { positives, negatives })
    }

    /// A pattern with all negation slots empty.
    pub fn positive(positives: Vec<Itemset>) -> Result<Self, Error> {
        let slots = positives.len().saturating_sub(1);
        NegativePattern::new(positives, vec![Itemset::empty(); slots])
    }

    pub fn positives(&self) -> &[Itemset] {
        &self.positives
    }

    pub fn negatives(&self) -> &[Itemset] {
        &self.negatives
    }

    /// Number of positive itemsets.
    pub fn positive_len(&self) -> usize {
        self.positives.len()
    }

    pub fn is_positive(&self) -> bool {
        self.negatives.iter().all(Itemset::is_empty)
    }

    /// The pattern with every negation slot cleared.
    pub fn positive_part(&self) -> NegativePattern {
        NegativePattern {
            positives: self.positives.clone(),
            negatives: vec![Itemset::empty(); self.negatives.len()],
        }
    }
}

impl fmt::Display for NegativePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_pattern(self))
    }
}

impl FromStr for NegativePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        parse_pattern(s)
    }
}

/// How a negated itemset `q` is tested against an itemset of the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonInclusion {
    /// Some item of `q` is absent.
    Partial,
    /// Every item of `q` is absent (disjointness).
    Total,
}

/// Which itemsets of the gap the non-inclusion test applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingMode {
    /// Each gap itemset individually.
    Soft,
    /// The union of all gap itemsets.
    Strict,
}

/// How multiple occurrences of the positive part are aggregated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OccurrenceMode {
    /// Some occurrence satisfies the negation constraints.
    Weak,
    /// Every occurrence satisfies them (and one exists).
    Strong,
    /// Every minimal-extent occurrence satisfies them (and one exists).
    StrongMinimal,
}

/// One containment relation out of the semantics grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SemanticsConfig {
    pub non_inclusion: NonInclusion,
    pub embedding: EmbeddingMode,
    pub occurrence: OccurrenceMode,
}

impl SemanticsConfig {
    pub const fn new(non_inclusion: NonInclusion, embedding: EmbeddingMode, occurrence: OccurrenceMode) -> Self {
        SemanticsConfig {
            non_inclusion,
            embedding,
            occurrence,
        }
    }

    /// The relation used by the eNSP algorithm.
    pub const ENSP: Self = Self::new(NonInclusion::Total, EmbeddingMode::Soft, OccurrenceMode::Strong);

    /// The relation used by the NegPSpan algorithm.
    pub const NEGPSPAN: Self = Self::new(NonInclusion::Total, EmbeddingMode::Soft, OccurrenceMode::Weak);

    /// Every mode combination, in a fixed order.
    pub const ALL: [Self; 12] = {
        let mut all = [Self::ENSP; 12];
        let ni = [NonInclusion::Partial, NonInclusion::Total];
        let em = [EmbeddingMode::Soft, EmbeddingMode::Strict];
        let oc = [OccurrenceMode::Weak, OccurrenceMode::Strong, OccurrenceMode::StrongMinimal];
        let mut k = 0;
        let mut i = 0;
        while i < 2 {
            let mut j = 0;
            while j < 2 {
                let mut l = 0;
                while l < 3 {
                    all[k] = Self::new(ni[i], em[j], oc[l]);
                    k += 1;
                    l += 1;
                }
                j += 1;
            }
            i += 1;
        }
        all
    };

    /// Resolve a named preset (`ensp` or `negpspan`).
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "ensp" => Some(Self::ENSP),
            "negpspan" => Some(Self::NEGPSPAN),
            _ => None,
        }
    }
}

impl fmt::Display for NonInclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonInclusion::Partial => "partial",
            NonInclusion::Total => "total",
        })
    }
}

impl fmt::Display for EmbeddingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingMode::Soft => "soft",
            EmbeddingMode::Strict => "strict",
        })
    }
}

impl fmt::Display for OccurrenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OccurrenceMode::Weak => "weak",
            OccurrenceMode::Strong => "strong",
            OccurrenceMode::StrongMinimal => "strong-minimal",
        })
    }
}

impl fmt::Display for SemanticsConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.non_inclusion, self.embedding, self.occurrence)
    }
}
