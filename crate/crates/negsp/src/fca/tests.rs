use super::*;
use std::collections::BTreeSet;

fn toy_context() -> BinaryContext {
    // o1: {a, b}, o2: {a}, o3: {b}
    BinaryContext::new(
        vec!["o1".into(), "o2".into(), "o3".into()],
        vec!["a".into(), "b".into()],
        &[vec![true, true], vec![true, false], vec![false, true]],
    )
    .unwrap()
}

fn attrs(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| (*s).to_owned()).collect()
}

#[test]
fn closure_examples() {
    let ctx = toy_context();
    // closure of the empty set: attributes shared by every object
    assert_eq!(closure(&attrs(&[]), &ctx).unwrap(), attrs(&[]));
    assert_eq!(closure(&attrs(&["a"]), &ctx).unwrap(), attrs(&["a"]));
    let once = closure(&attrs(&["b"]), &ctx).unwrap();
    assert_eq!(closure(&once, &ctx).unwrap(), once);
    assert!(matches!(
        closure(&attrs(&["zz"]), &ctx),
        Err(FcaError::UnknownAttribute(_))
    ));
}

#[test]
fn toy_context_has_a_diamond_lattice() {
    let ctx = toy_context();
    let concepts = enumerate_concepts(&ctx, 1000).unwrap();
    let intents: Vec<Vec<&str>> = concepts.iter().map(|c| c.intent_ids(&ctx)).collect();
    assert_eq!(intents.len(), 4);
    assert_eq!(intents[0], Vec::<&str>::new());
    assert!(intents.contains(&vec!["a"]));
    assert!(intents.contains(&vec!["b"]));
    assert!(intents.contains(&vec!["a", "b"]));

    // mutual closure on every concept
    for c in &concepts {
        let closed = closure(&c.intent_ids(&ctx).iter().map(|s| (*s).to_owned()).collect(), &ctx).unwrap();
        let intent: BTreeSet<String> = c.intent_ids(&ctx).iter().map(|s| (*s).to_owned()).collect();
        assert_eq!(closed, intent);
    }

    let lat = lattice(&concepts);
    assert_eq!(lat.edges.len(), 4);
    let top = concepts.iter().position(|c| c.extent.len() == 3).unwrap();
    let bottom = concepts.iter().position(|c| c.extent.len() == 1).unwrap();
    assert!(!lat.edges.contains(&(top, bottom)), "diamond has no top-bottom edge");
}

#[test]
fn duplicate_rows_only_merge_extents() {
    let base = toy_context();
    let doubled = BinaryContext::new(
        vec!["o1".into(), "o2".into(), "o3".into(), "o2bis".into()],
        vec!["a".into(), "b".into()],
        &[
            vec![true, true],
            vec![true, false],
            vec![false, true],
            vec![true, false],
        ],
    )
    .unwrap();
    let a = enumerate_concepts(&base, 1000).unwrap();
    let b = enumerate_concepts(&doubled, 1000).unwrap();
    let intents = |cs: &[Concept]| cs.iter().map(|c| c.intent.clone()).collect::<Vec<_>>();
    assert_eq!(intents(&a), intents(&b));
    let ext_a = a.iter().find(|c| c.intent == vec![0]).unwrap().extent.len();
    let ext_b = b.iter().find(|c| c.intent == vec![0]).unwrap().extent.len();
    assert_eq!((ext_a, ext_b), (2, 3));
}

#[test]
fn zero_object_context_has_the_full_intent_concept() {
    let ctx = BinaryContext::new(vec![], vec!["a".into(), "b".into()], &[]).unwrap();
    let concepts = enumerate_concepts(&ctx, 10).unwrap();
    assert_eq!(concepts.len(), 1);
    assert!(concepts[0].extent.is_empty());
    assert_eq!(concepts[0].intent, vec![0, 1]);
}

#[test]
fn chain_context_yields_a_path() {
    // nested rows: {a} ⊂ {a,b} ⊂ {a,b,c}
    let ctx = BinaryContext::new(
        vec!["u".into(), "v".into(), "w".into()],
        vec!["a".into(), "b".into(), "c".into()],
        &[
            vec![true, false, false],
            vec![true, true, false],
            vec![true, true, true],
        ],
    )
    .unwrap();
    let concepts = enumerate_concepts(&ctx, 100).unwrap();
    assert_eq!(concepts.len(), 3);
    let lat = lattice(&concepts);
    assert_eq!(lat.edges.len(), 2);
    let mut out_degree = [0; 3];
    let mut in_degree = [0; 3];
    for &(p, c) in &lat.edges {
        out_degree[p] += 1;
        in_degree[c] += 1;
    }
    assert!(out_degree.iter().all(|&d| d <= 1) && in_degree.iter().all(|&d| d <= 1));
}

#[test]
fn budget_is_enforced() {
    let ctx = toy_context();
    assert!(matches!(
        enumerate_concepts(&ctx, 3),
        Err(FcaError::BudgetExceeded { budget: 3 })
    ));
}

#[test]
fn dot_output_is_syntactically_sound() {
    let ctx = toy_context();
    let lat = lattice(&enumerate_concepts(&ctx, 100).unwrap());
    let dot = lattice_dot(&lat, &ctx);
    assert!(dot.starts_with("digraph concepts {"));
    assert!(dot.trim_end().ends_with('}'));
    assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    // every edge endpoint is a declared node
    for line in dot.lines().filter(|l| l.contains("->")) {
        let (from, rest) = line.trim().split_once(" -> ").unwrap();
        let to = rest.trim_end_matches(';');
        for node in [from, to] {
            assert!(dot.contains(&format!("{node} [label=")), "undeclared node {node}");
        }
    }
    // labels carry the extent size marker
    assert!(dot.contains("#3"));
}

#[test]
fn json_export_lists_concepts_and_edges() {
    let ctx = toy_context();
    let lat = lattice(&enumerate_concepts(&ctx, 100).unwrap());
    let json: serde_json::Value = serde_json::from_str(&lattice_json(&lat, &ctx)).unwrap();
    assert_eq!(json["concepts"].as_array().unwrap().len(), 4);
    assert_eq!(json["edges"].as_array().unwrap().len(), 4);
    assert_eq!(json["concepts"][0]["extent_size"], 3);
}

#[test]
fn incidence_csv_round_trip() {
    let csv = "\
,a,b
o1,1,1
o2,1,0
o3,0,1
";
    let ctx = BinaryContext::from_csv(csv).unwrap();
    assert_eq!(ctx, toy_context());
    assert!(matches!(
        BinaryContext::from_csv(",a,b\no1,1,2\n").unwrap_err(),
        FcaError::BadCell { row: 2, .. }
    ));
    assert!(matches!(
        BinaryContext::from_csv(",a,b\no1,1\n").unwrap_err(),
        FcaError::RowWidth { row: 2, .. }
    ));
    assert!(matches!(
        BinaryContext::from_csv(",a,a\no1,1,1\n").unwrap_err(),
        FcaError::DuplicateAttribute(_)
    ));
}

#[test]
fn response_contexts_use_tick_and_no_tick_attributes() {
    use crate::survey::{QuestionId, Response};

    let mut r1 = Response::new("u1");
    r1.ticks
        .insert(QuestionId::Q3, ["i0", "i2", "i3"].iter().map(|s| (*s).to_owned()).collect());
    let mut r2 = Response::new("u2");
    r2.ticks.insert(
        QuestionId::Q3,
        ["i0", "i1", "i2", "i3", "i4"].iter().map(|s| (*s).to_owned()).collect(),
    );
    let ctx = context_from_responses(&[r1, r2], QuestionId::Q3);
    assert_eq!(ctx.objects(), ["u1", "u2"]);
    assert_eq!(ctx.attributes().len(), 10);
    assert_eq!(
        ctx.attributes(),
        ["i0", "i1", "i2", "i3", "i4", "ni0", "ni1", "ni2", "ni3", "ni4"]
    );
    // u1 ticked i0, i2, i3 and left i1, i4 unticked
    let a = |name: &str| ctx.attributes().iter().position(|x| x == name).unwrap();
    assert!(ctx.incident(0, a("i0")));
    assert!(!ctx.incident(0, a("i1")));
    assert!(ctx.incident(0, a("ni1")));
    assert!(ctx.incident(0, a("ni4")));
    // u2 ticked everything: incident with all five positive attributes
    for id in ["i0", "i1", "i2", "i3", "i4"] {
        assert!(ctx.incident(1, a(id)));
        assert!(!ctx.incident(1, a(&format!("n{id}"))));
    }

    let empty = context_from_responses(&[], QuestionId::Q3);
    assert_eq!(empty.objects().len(), 0);
    assert_eq!(enumerate_concepts(&empty, 10).unwrap().len(), 1);
}
