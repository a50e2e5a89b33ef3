//! Toolkit for sequential patterns with negation.
//!
//! A pattern such as `d !(a f) b` matches sequences that contain `d` followed
//! by `b` with no `a f` in between. The catch is that the "no" part admits
//! several readings. This crate makes the choice explicit: a
//! [`core::SemanticsConfig`] picks one containment relation out of a grid of
//! non-inclusion (partial/total), embedding (soft/strict) and occurrence
//! (weak/strong/strong-minimal) modes, and everything downstream (matching,
//! support counting, mining, questionnaire analysis) is parameterized by it.
//!
//! Modules:
//! - [`core`]: items, itemsets, sequences, patterns, parsing and formatting.
//! - [`matcher`]: embeddings, non-inclusion tests, containment, support.
//! - [`miner`]: frequent pattern mining plus a brute-force reference miner.
//! - [`survey`]: the five-question questionnaire, answer keys, and
//!   classification of responses into semantic interpretations.
//! - [`fca`]: formal concept analysis over binary answer contexts.
//!
//! With the default `parallel` feature, support counting and candidate
//! evaluation fan out over a rayon pool; `*_sequential` variants are always
//! available and return identical results.

pub mod core;
mod exec;
pub mod fca;
pub mod matcher;
pub mod miner;
pub mod survey;
