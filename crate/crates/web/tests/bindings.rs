use coarsecat_web::{admissibility, inspect_space, universal_check};
use serde_json::Value;

const DOC: &str = r#"{
  "version": "1",
  "spaces": {
    "X": {"carrier": ["a", "b", "c"], "coarse_generators": [["a", "b"]], "bounded_generators": [["c"]]},
    "P": {"carrier": ["p"]}
  },
  "maps": {"f": {"dom": "X", "cod": "P", "table": {"a": "p", "b": "p", "c": "p"}}},
  "diagrams": {"D": {"objects": {"A": "X", "B": "P"}, "arrows": [{"src": "A", "dst": "B", "map": "f"}]}}
}"#;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn inspect_reports_components_and_split() {
    let v = parse(inspect_space(DOC, "X"));
    assert_eq!(v["exit"], 0);
    assert_eq!(v["components"]["count"], 2);
    assert_eq!(v["split"]["bounded_part"]["carrier"], serde_json::json!(["c"]));
    assert_eq!(v["flasque"]["flasque"], false);
    assert_eq!(parse(inspect_space(DOC, "missing"))["exit"], 2);
}

#[test]
fn universal_check_passes_for_computed_objects() {
    for colimit in [false, true] {
        let v = parse(universal_check(DOC, "D", colimit, 2));
        assert_eq!(v["exit"], 0, "{v}");
        assert_eq!(v["result"]["verdict"]["pass"], true);
    }
}

#[test]
fn fixture_admissibility() {
    let v = parse(admissibility("", "exa_N"));
    assert_eq!(v["exit"], 1);
    assert_eq!(v["result"]["witness"]["preimage"], "ℕ");
}

#[test]
fn page_cap_is_enforced() {
    let names: Vec<String> = (0..13).map(|i| format!("\"{i}\"")).collect();
    let doc = format!(
        r#"{{"version": "1", "spaces": {{"X": {{"carrier": [{}]}}}}}}"#,
        names.join(",")
    );
    let v = parse(inspect_space(&doc, "X"));
    assert_eq!(v["exit"], 2);
}
