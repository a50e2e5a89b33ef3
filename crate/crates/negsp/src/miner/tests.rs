use super::*;
use crate::core::{parse_dataset, parse_pattern};
use crate::matcher;

const TABLE1: &str = "\
p0: e (c a f) d b e d
p1: c a d b e d
p2: e (c a) d
p3: d e (c a) b d b e f
p4: c e b (f a c) d e c
";

fn table1() -> Dataset {
    parse_dataset(TABLE1).unwrap()
}

fn config(minsup: usize, caps: (usize, usize, usize), semantics: SemanticsConfig) -> MinerConfig {
    MinerConfig {
        minsup,
        max_positive_len: caps.0,
        max_itemset_size: caps.1,
        max_negation_size: caps.2,
        semantics,
    }
}

fn texts(results: &[MinedPattern]) -> Vec<String> {
    results.iter().map(|m| format_pattern(&m.pattern)).collect()
}

fn find<'a>(results: &'a [MinedPattern], text: &str) -> Option<&'a MinedPattern> {
    results.iter().find(|m| format_pattern(&m.pattern) == text)
}

#[test]
fn mine_positive_singletons() {
    let out = mine_positive(&table1(), &config(5, (1, 1, 1), SemanticsConfig::NEGPSPAN)).unwrap();
    assert_eq!(texts(&out), ["a", "c", "d", "e"]);
    assert_eq!(find(&out, "d").unwrap().support, 5);
    assert_eq!(find(&out, "e").unwrap().support, 5);
}

#[test]
fn mine_positive_finds_the_example_pattern() {
    let out = mine_positive(&table1(), &config(4, (3, 3, 1), SemanticsConfig::NEGPSPAN)).unwrap();
    let hit = find(&out, "e (a c) d").expect("pattern is frequent");
    assert_eq!(hit.support, 4);
    assert_eq!(hit.ids, ["p0", "p2", "p3", "p4"]);
}

#[test]
fn unattainable_threshold_yields_nothing() {
    let d = table1();
    assert!(mine_positive(&d, &config(6, (2, 2, 1), SemanticsConfig::NEGPSPAN))
        .unwrap()
        .is_empty());
    let out = mine_positive(&d, &config(5, (2, 2, 1), SemanticsConfig::NEGPSPAN)).unwrap();
    assert!(find(&out, "f").is_none(), "f occurs in only 3 sequences");
    assert!(matches!(
        mine_positive(&d, &config(0, (2, 2, 1), SemanticsConfig::NEGPSPAN)),
        Err(MinerError::InvalidConfig)
    ));
}

#[test]
fn prefix_supports_are_antimonotone() {
    let out = mine_positive(&table1(), &config(2, (3, 2, 1), SemanticsConfig::NEGPSPAN)).unwrap();
    for m in &out {
        for cut in 1..m.pattern.positive_len() {
            let prefix = NegativePattern::positive(m.pattern.positives()[..cut].to_vec()).unwrap();
            let prefix_support = find(&out, &format_pattern(&prefix))
                .map(|p| p.support)
                .unwrap_or_else(|| matcher::support(&table1(), &prefix, SemanticsConfig::NEGPSPAN).count);
            assert!(
                prefix_support >= m.support,
                "prefix {prefix} of {} has smaller support",
                m.pattern
            );
        }
    }
}

#[test]
fn negation_candidates_fill_slots() {
    let cfg = config(1, (3, 2, 1), SemanticsConfig::NEGPSPAN);
    let freq: BTreeSet<Item> = ["e"].iter().map(|s| s.parse().unwrap()).collect();
    let out = generate_negation_candidates(&parse_pattern("b f").unwrap(), &freq, &cfg);
    assert_eq!(
        out.iter().map(format_pattern).collect::<Vec<_>>(),
        ["b !e f"]
    );

    // a single positive itemset has no slots
    let out = generate_negation_candidates(&parse_pattern("a").unwrap(), &freq, &cfg);
    assert!(out.is_empty());

    let cfg = config(1, (3, 2, 2), SemanticsConfig::NEGPSPAN);
    let freq: BTreeSet<Item> = ["a", "f"].iter().map(|s| s.parse().unwrap()).collect();
    let out = generate_negation_candidates(&parse_pattern("d b").unwrap(), &freq, &cfg);
    assert_eq!(
        out.iter().map(format_pattern).collect::<Vec<_>>(),
        ["d !a b", "d !f b", "d !(a f) b"]
    );
}

#[test]
fn mine_negative_finds_the_example_pattern() {
    let out = mine_negative(&table1(), &config(3, (2, 1, 1), SemanticsConfig::NEGPSPAN)).unwrap();
    let hit = find(&out, "e !b d").expect("pattern is frequent");
    assert_eq!(hit.support, 3);
    assert_eq!(hit.ids, ["p0", "p1", "p2"]);
}

#[test]
fn soft_and_strict_collapse_under_total() {
    let d = table1();
    let soft = mine_negative(&d, &config(2, (2, 2, 2), SemanticsConfig::NEGPSPAN)).unwrap();
    let strict_cfg = SemanticsConfig::new(
        crate::core::NonInclusion::Total,
        crate::core::EmbeddingMode::Strict,
        crate::core::OccurrenceMode::Weak,
    );
    let strict = mine_negative(&d, &config(2, (2, 2, 2), strict_cfg)).unwrap();
    assert_eq!(soft, strict);
}

#[test]
fn single_sequence_base_case() {
    let d = parse_dataset("x: a b a\n").unwrap();
    let out = mine_negative(&d, &config(1, (1, 1, 1), SemanticsConfig::NEGPSPAN)).unwrap();
    assert_eq!(texts(&out), ["a", "b"]);
    assert!(out.iter().all(|m| m.support == 1 && m.ids == ["x"]));
}

#[test]
fn zero_negation_cap_keeps_only_positive_patterns() {
    let d = table1();
    let cfg = config(3, (2, 1, 0), SemanticsConfig::NEGPSPAN);
    let grown = mine_negative(&d, &cfg).unwrap();
    assert!(grown.iter().all(|m| m.pattern.is_positive()));
    assert_eq!(grown, mine_positive(&d, &cfg).unwrap());
    let brute = brute_force_mine(&d, &cfg, 1_000_000).unwrap();
    assert!(brute.iter().all(|m| m.pattern.is_positive()));
}

#[test]
fn miner_matches_brute_force_on_the_example_table() {
    let d = table1();
    for semantics in [
        SemanticsConfig::ENSP,
        SemanticsConfig::NEGPSPAN,
        SemanticsConfig::new(
            crate::core::NonInclusion::Partial,
            crate::core::EmbeddingMode::Soft,
            crate::core::OccurrenceMode::Weak,
        ),
    ] {
        let cfg = config(3, (2, 2, 2), semantics);
        let grown = mine_negative(&d, &cfg).unwrap();
        let brute = brute_force_mine(&d, &cfg, 1_000_000).unwrap();
        assert_eq!(grown, brute, "disagreement under {semantics}");
    }
}

#[test]
fn grown_candidates_match_the_public_candidate_generator() {
    let d = table1();
    let cfg = config(3, (2, 1, 2), SemanticsConfig::NEGPSPAN);
    let freq: BTreeSet<Item> = frequent_items(&d, cfg.minsup).into_iter().collect();
    let out = mine_negative(&d, &cfg).unwrap();
    for m in out.iter().filter(|m| !m.pattern.is_positive()) {
        let base = m.pattern.positive_part();
        let candidates = generate_negation_candidates(&base, &freq, &cfg);
        assert!(
            candidates.contains(&m.pattern),
            "{} not in the candidate language of {}",
            m.pattern,
            base
        );
    }
}

#[test]
fn reported_supports_match_the_matcher() {
    let d = table1();
    let cfg = config(2, (2, 2, 1), SemanticsConfig::ENSP);
    for m in mine_negative(&d, &cfg).unwrap() {
        let sup = matcher::support(&d, &m.pattern, cfg.semantics);
        assert_eq!(m.support, sup.count, "support of {}", m.pattern);
        assert_eq!(m.ids, sup.ids);
    }
}

#[test]
fn output_is_deterministic_and_canonically_ordered() {
    let d = table1();
    let cfg = config(2, (2, 2, 1), SemanticsConfig::NEGPSPAN);
    let a = mine_negative(&d, &cfg).unwrap();
    let b = mine_negative_sequential(&d, &cfg).unwrap();
    assert_eq!(a, b);
    let keys: Vec<(usize, String)> = a
        .iter()
        .map(|m| (m.pattern.positive_len(), format_pattern(&m.pattern)))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);

    let bf_a = brute_force_mine(&d, &cfg, 1_000_000).unwrap();
    let bf_b = brute_force_mine_sequential(&d, &cfg, 1_000_000).unwrap();
    assert_eq!(bf_a, bf_b);
}

#[test]
fn plain_fallback_handles_large_alphabets() {
    // 70 distinct items forces the non-bitmask path
    let mut lines = String::new();
    for s in 0..4 {
        lines.push_str(&format!("q{s}: a"));
        for k in 0..17 {
            lines.push_str(&format!(" x{s}_{k}"));
        }
        lines.push_str(" b\n");
    }
    let d = parse_dataset(&lines).unwrap();
    assert!(d.alphabet().len() > 64);

    let cfg = config(4, (2, 1, 1), SemanticsConfig::NEGPSPAN);
    let grown = mine_negative(&d, &cfg).unwrap();
    assert_eq!(texts(&grown), ["a", "b", "a !a b", "a !b b", "a b"]);
    assert!(grown.iter().all(|m| m.support == 4));
    assert_eq!(grown, brute_force_mine(&d, &cfg, 1_000_000).unwrap());
    for m in &grown {
        assert_eq!(matcher::support(&d, &m.pattern, cfg.semantics).count, m.support);
    }
}

#[test]
fn brute_force_budget_is_enforced() {
    let d = table1();
    let cfg = config(2, (3, 2, 2), SemanticsConfig::NEGPSPAN);
    assert!(matches!(
        brute_force_mine(&d, &cfg, 100),
        Err(MinerError::BudgetExceeded { budget: 100, .. })
    ));
}

#[test]
fn serialization_formats() {
    let d = table1();
    let cfg = config(3, (2, 1, 1), SemanticsConfig::NEGPSPAN);
    let out = mine_negative(&d, &cfg).unwrap();
    let tsv = to_tsv(&out);
    assert!(tsv.lines().any(|l| l == "e !b d\t3\tp0,p1,p2"), "missing line in:\n{tsv}");
    let json: serde_json::Value = serde_json::from_str(&to_json(&out)).unwrap();
    let entry = json
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["pattern"] == "e !b d")
        .unwrap();
    assert_eq!(entry["support"], 3);
    assert_eq!(entry["ids"][0], "p0");
}
