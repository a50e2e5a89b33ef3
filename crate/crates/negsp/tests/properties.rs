//! Property tests: round-trips, definitional cross-checks, and
//! order-theoretic invariants on randomly generated inputs.

use std::collections::BTreeSet;

use proptest::prelude::*;

use negsp::core::{
    format_pattern, format_sequence, parse_pattern, parse_sequence, Dataset, Item, Itemset, NegativePattern,
    NonInclusion, OccurrenceMode, Sequence, SemanticsConfig,
};
use negsp::fca::{closure, enumerate_concepts, BinaryContext};
use negsp::matcher;
use negsp::miner::{brute_force_mine, mine_negative, MinerConfig};

fn arb_item() -> impl Strategy<Value = Item> {
    prop::sample::select(vec!["a", "b", "c", "d", "e"]).prop_map(|s| s.parse().unwrap())
}

fn arb_itemset(max_items: usize) -> impl Strategy<Value = Itemset> {
    prop::collection::btree_set(arb_item(), 1..=max_items).prop_map(Itemset::new)
}

fn arb_sequence() -> impl Strategy<Value = Sequence> {
    prop::collection::vec(arb_itemset(3), 1..=6).prop_map(|sets| Sequence::new(sets).unwrap())
}

fn arb_pattern() -> impl Strategy<Value = NegativePattern> {
    prop::collection::vec(arb_itemset(2), 1..=3).prop_flat_map(|positives| {
        let slots = positives.len() - 1;
        prop::collection::vec(prop::option::of(arb_itemset(2)), slots)
            .prop_map(move |negations| {
                let negatives = negations.into_iter().map(|q| q.unwrap_or_else(Itemset::empty)).collect();
                NegativePattern::new(positives.clone(), negatives).unwrap()
            })
    })
}

fn arb_config() -> impl Strategy<Value = SemanticsConfig> {
    prop::sample::select(SemanticsConfig::ALL.to_vec())
}

proptest! {
    #[test]
    fn pattern_format_parse_round_trip(p in arb_pattern()) {
        prop_assert_eq!(parse_pattern(&format_pattern(&p)).unwrap(), p);
    }

    #[test]
    fn sequence_format_parse_round_trip(s in arb_sequence()) {
        prop_assert_eq!(parse_sequence(&format_sequence(&s)).unwrap(), s);
    }

    /// Reversing the written item order inside every group parses to the
    /// same value.
    #[test]
    fn itemset_order_is_immaterial(s in arb_sequence()) {
        let scrambled: Vec<String> = s
            .itemsets()
            .iter()
            .map(|set| {
                let names: Vec<&str> = set.iter().rev().map(Item::as_str).collect();
                if names.len() == 1 { names[0].to_owned() } else { format!("({})", names.join(" ")) }
            })
            .collect();
        prop_assert_eq!(parse_sequence(&scrambled.join(" ")).unwrap(), s);
    }

    #[test]
    fn non_inclusion_matches_its_set_definition(q in arb_itemset(3), i in arb_itemset(3)) {
        let some_missing = q.iter().any(|e| !i.contains(e));
        let all_missing = q.iter().all(|e| !i.contains(e));
        prop_assert_eq!(matcher::non_inclusion(&q, &i, NonInclusion::Partial), some_missing);
        prop_assert_eq!(matcher::non_inclusion(&q, &i, NonInclusion::Total), all_missing);
    }

    /// `contains` agrees with quantifying its own primitives: the embedding
    /// enumeration, the per-embedding constraint check, and the minimal
    /// filter.
    #[test]
    fn contains_equals_definitional_quantification(
        s in arb_sequence(),
        p in arb_pattern(),
        c in arb_config(),
    ) {
        let embeddings = matcher::positive_embeddings(&s, &p);
        let satisfied = |e: &matcher::Embedding| {
            matcher::embedding_satisfies(&s, &p, e, c.non_inclusion, c.embedding).unwrap()
        };
        let expected = match c.occurrence {
            OccurrenceMode::Weak => embeddings.iter().any(satisfied),
            OccurrenceMode::Strong => !embeddings.is_empty() && embeddings.iter().all(satisfied),
            OccurrenceMode::StrongMinimal => {
                !embeddings.is_empty() && matcher::minimal_embeddings(&s, &p).iter().all(satisfied)
            }
        };
        let report = matcher::contains(&s, &p, c);
        prop_assert_eq!(report.contained, expected);
        if let Some(witness) = &report.witness {
            prop_assert!(report.contained);
            prop_assert!(satisfied(witness));
        }
        if let Some(violating) = &report.violating {
            prop_assert!(!report.contained);
            prop_assert!(!satisfied(violating));
        }
    }

    /// Minimal embeddings are embeddings, and an embedding is minimal iff no
    /// other embedding's extent fits strictly inside its own.
    #[test]
    fn minimal_embeddings_are_extent_minimal(s in arb_sequence(), p in arb_pattern()) {
        let all = matcher::positive_embeddings(&s, &p);
        let minimal = matcher::minimal_embeddings(&s, &p);
        for e in &minimal {
            prop_assert!(all.contains(e));
        }
        for e in &all {
            let (lo, hi) = e.extent();
            let strictly_inside = all.iter().any(|other| {
                let (a, b) = other.extent();
                (a, b) != (lo, hi) && lo <= a && b <= hi
            });
            prop_assert_eq!(minimal.contains(e), !strictly_inside);
        }
    }
}

fn arb_context() -> impl Strategy<Value = BinaryContext> {
    (1usize..=6, 1usize..=12).prop_flat_map(|(n, m)| {
        prop::collection::vec(0u32..1 << m, n).prop_map(move |rows| {
            let objects = (0..n).map(|i| format!("g{i}")).collect();
            let attributes: Vec<String> = (0..m).map(|i| format!("m{i}")).collect();
            BinaryContext::from_rows(objects, attributes, rows.iter().map(|&r| r as u128).collect()).unwrap()
        })
    })
}

fn attr_subset(ctx: &BinaryContext, mask: u32) -> BTreeSet<String> {
    ctx.attributes()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, a)| a.clone())
        .collect()
}

fn object_derivation(ctx: &BinaryContext, attrs: &BTreeSet<String>) -> BTreeSet<usize> {
    let indices: Vec<usize> = attrs
        .iter()
        .map(|a| ctx.attributes().iter().position(|x| x == a).unwrap())
        .collect();
    (0..ctx.objects().len())
        .filter(|&o| indices.iter().all(|&a| ctx.incident(o, a)))
        .collect()
}

proptest! {
    /// Derivation is antitone on both sides and `closure` is a closure
    /// operator (extensive, monotone, idempotent).
    #[test]
    fn galois_connection_properties(ctx in arb_context(), x in any::<u32>(), y in any::<u32>()) {
        let m = ctx.attributes().len();
        let x = attr_subset(&ctx, x & ((1 << m) - 1));
        let mut y = attr_subset(&ctx, y & ((1 << m) - 1));
        y.extend(x.iter().cloned()); // force x ⊆ y

        prop_assert!(object_derivation(&ctx, &y).is_subset(&object_derivation(&ctx, &x)));

        let cx = closure(&x, &ctx).unwrap();
        let cy = closure(&y, &ctx).unwrap();
        prop_assert!(x.is_subset(&cx));
        prop_assert!(cx.is_subset(&cy));
        prop_assert_eq!(closure(&cx, &ctx).unwrap(), cx.clone());
        // closing does not change the derived extent
        prop_assert_eq!(object_derivation(&ctx, &cx), object_derivation(&ctx, &x));
    }

    /// Concept count equals the brute-force count of closed attribute sets
    /// (contexts up to 12 attributes).
    #[test]
    fn concept_count_matches_brute_force(ctx in arb_context()) {
        let m = ctx.attributes().len();
        let concepts = enumerate_concepts(&ctx, (1 << m) + 1).unwrap();
        let closed = (0u32..1 << m)
            .filter(|&mask| {
                let attrs = attr_subset(&ctx, mask);
                closure(&attrs, &ctx).unwrap() == attrs
            })
            .count();
        prop_assert_eq!(concepts.len(), closed);
    }
}

fn arb_dataset() -> impl Strategy<Value = Dataset> {
    prop::collection::vec(prop::collection::vec(arb_itemset(2), 1..=5), 2..=6).prop_map(|rows| {
        let sequences = rows.into_iter().map(|sets| Sequence::new(sets).unwrap()).collect();
        Dataset::new(sequences).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The grown miner equals the brute-force reference on small random
    /// datasets under a random semantics.
    #[test]
    fn miner_agrees_with_brute_force(d in arb_dataset(), c in arb_config(), minsup in 1usize..=2) {
        let cfg = MinerConfig {
            minsup,
            max_positive_len: 2,
            max_itemset_size: 2,
            max_negation_size: 1,
            semantics: c,
        };
        let grown = mine_negative(&d, &cfg).unwrap();
        let brute = brute_force_mine(&d, &cfg, 100_000).unwrap();
        prop_assert_eq!(grown, brute);
    }

    /// Mining under total non-inclusion yields a subset of the partial
    /// output, with no larger support for any shared pattern.
    #[test]
    fn total_mining_output_is_within_partial(d in arb_dataset(), c in arb_config(), minsup in 1usize..=2) {
        let with_ni = |ni| MinerConfig {
            minsup,
            max_positive_len: 2,
            max_itemset_size: 2,
            max_negation_size: 1,
            semantics: SemanticsConfig::new(ni, c.embedding, c.occurrence),
        };
        let total = mine_negative(&d, &with_ni(NonInclusion::Total)).unwrap();
        let partial = mine_negative(&d, &with_ni(NonInclusion::Partial)).unwrap();
        for t in &total {
            let twin = partial.iter().find(|p| p.pattern == t.pattern);
            prop_assert!(twin.is_some(), "{} frequent under total only", t.pattern);
            prop_assert!(t.support <= twin.unwrap().support);
        }
    }

    /// Every reported support is the matcher's support, recomputed.
    #[test]
    fn mined_supports_are_sound(d in arb_dataset(), c in arb_config()) {
        let cfg = MinerConfig {
            minsup: 1,
            max_positive_len: 2,
            max_itemset_size: 1,
            max_negation_size: 1,
            semantics: c,
        };
        for m in mine_negative(&d, &cfg).unwrap() {
            let sup = matcher::support(&d, &m.pattern, c);
            prop_assert_eq!(m.support, sup.count);
            prop_assert_eq!(m.ids, sup.ids);
        }
    }
}
