use monostar::parse_expr;
use monostar::report::{run, B3Mode, CheckSelection, Expected, RunConfig, RunError, CHECKS};
use monostar::{Scalar, Status};

fn config(b: [&str; 3]) -> RunConfig {
    RunConfig {
        field: b.map(String::from),
        ..RunConfig::default()
    }
}

fn only(mut cfg: RunConfig, ids: &[&str]) -> RunConfig {
    cfg.checks = CheckSelection::Ids(ids.iter().map(|s| s.to_string()).collect());
    cfg
}

#[test]
fn every_printed_expression_parses_back() {
    let rep = run(&config(["1/3*q1", "1/3*q2", "1/3*q3"])).unwrap();
    for v in &rep.verdicts {
        for text in [&v.lhs, &v.rhs] {
            let e = parse_expr::<Scalar>(text).unwrap_or_else(|e| panic!("{}: {text}: {e}", v.id));
            assert_eq!(&e.to_string(), text);
        }
    }
    for text in [&rep.field.b1, &rep.field.b2, &rep.field.b3, &rep.field.div] {
        parse_expr::<Scalar>(text).unwrap();
    }
}

#[test]
fn constant_monopole_reproduces_everything_but_the_half_jacobiator() {
    let rep = run(&config(["1/3*q1", "1/3*q2", "1/3*q3"])).unwrap();
    let off: Vec<&str> = rep
        .verdicts
        .iter()
        .filter(|v| !matches!((v.expected, v.status), (Expected::Pass, Status::Pass) | (Expected::Nonzero, Status::Fail)))
        .map(|v| v.id.as_str())
        .collect();
    assert_eq!(off, ["a2_antisym_half_jacobiator"]);
    assert!(!rep.reproduced());
    assert!(rep.verdicts.iter().any(|v| v.id == "obstruction_constant"));
    assert!(rep.verdicts.iter().all(|v| v.id != "obstruction_nonconstant"));
    assert_eq!(rep.conventions["A2_p123/div"], "-2/3");
    assert_eq!(rep.conventions["jacobiator_p123/div"], "-1");
}

#[test]
fn divergence_free_field_reproduces_everything() {
    let rep = run(&config(["q1", "-q2", "0"])).unwrap();
    assert!(rep.reproduced(), "{}", rep.to_text());
    assert_eq!(rep.field.div, "0");
    assert!(rep.to_text().contains("associative-compatible"));
}

#[test]
fn varying_density_witness_mentions_position() {
    let rep = run(&only(config(["1/2*q1^2", "0", "0"]), &["obstruction_nonconstant"])).unwrap();
    let v = &rep.verdicts[0];
    assert_eq!(v.status, Status::Fail);
    assert_eq!(v.expected, Expected::Nonzero);
    assert!(v.witness.as_deref().unwrap().contains("q1"));
}

#[test]
fn inapplicable_check_named_explicitly_is_rejected() {
    let err = run(&only(config(["1/2*q1^2", "0", "0"]), &["obstruction_constant"])).unwrap_err();
    assert!(matches!(err, RunError::NotApplicable { .. }));
}

#[test]
fn json_is_deterministic_and_complete() {
    let mut cfg = only(config(["1/3*q1", "1/3*q2", "1/3*q3"]), &["unit", "pentagon", "a3_alternation"]);
    cfg.b3_mode = B3Mode::Pair(9);
    let a = run(&cfg).unwrap().to_json();
    assert_eq!(a, run(&cfg).unwrap().to_json());
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["b3"], serde_json::json!(["random:9", "random:10"]));
    assert_eq!(v["summary"]["pass"], 3);
    assert_eq!(v["verdicts"][0]["expected"], "pass");
    assert!(v["engine"]["version"].is_string());
    for key in ["conventions", "field", "verdicts", "summary"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn registry_ids_are_unique() {
    let mut ids: Vec<_> = CHECKS.iter().map(|c| c.id).collect();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), CHECKS.len());
}
