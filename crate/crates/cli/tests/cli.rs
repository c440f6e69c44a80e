use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const DOC: &str = r#"{
  "version": "1",
  "spaces": {
    "A": {"carrier": ["0", "1"], "classical": true},
    "B": {"carrier": ["u", "v"], "coarse_generators": [["u", "v"]]},
    "X": {"carrier": ["x", "y", "z"], "coarse_generators": [["x", "y"]], "bounded_generators": [["z"]]}
  },
  "maps": {
    "idB": {"dom": "B", "cod": "B", "table": {"u": "u", "v": "v"}},
    "swap": {"dom": "B", "cod": "B", "table": {"u": "v", "v": "u"}}
  },
  "diagrams": {
    "span": {"objects": {"S": "B", "T": "B", "U": "B"},
             "arrows": [{"src": "S", "dst": "T", "map": "idB"}, {"src": "S", "dst": "U", "map": "swap"}]}
  }
}"#;

fn coarsecat(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> (i32, Value, Output) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_coarsecat"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    let out = child.wait_with_output().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, out)
}

#[test]
fn exa_n_fixture_is_not_admissible() {
    let (code, v, _) = coarsecat(&["admissible", "--fixture", "exa_N"], None, &[]);
    assert_eq!(code, 1);
    let w = &v["result"]["witness"];
    assert_eq!(w["object"], "N_min,min");
    assert_eq!(w["chain"][0]["object"], "N_max,max");
    assert_eq!(w["preimage"], "ℕ");
}

#[test]
fn ex_po_fixture_pushes_out_to_triv_full() {
    let (code, v, _) = coarsecat(&["colimit", "--fixture", "ex_PO"], None, &[]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["tag"], "(Triv, Full)");
}

#[test]
fn oracle_on_a_product_passes() {
    let (code, v, _) = coarsecat(
        &["oracle", "--space", "A", "--space", "B", "--test-cap", "3"],
        Some(DOC),
        &[],
    );
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["verdict"]["pass"], true);
}

#[test]
fn oracle_on_a_pushout_with_mutants() {
    let args = [
        "oracle",
        "--diagram",
        "span",
        "--side",
        "colimit",
        "--test-cap",
        "2",
        "--mutants",
        "6",
        "--seed",
        "3",
    ];
    let (code, v, _) = coarsecat(&args, Some(DOC), &[]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["mutants"]["survivors"], serde_json::json!([]));
}

#[test]
fn reports_are_deterministic() {
    let args = ["product", "--space", "X", "--space", "B"];
    let (_, _, first) = coarsecat(&args, Some(DOC), &[]);
    let (_, _, second) = coarsecat(&args, Some(DOC), &[]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn input_file_and_normalize_round_trip() {
    let dir = std::env::temp_dir().join(format!("coarsecat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("doc.json");
    std::fs::write(&path, DOC).unwrap();
    let (code, v, _) = coarsecat(&["normalize", "--input", path.to_str().unwrap()], None, &[]);
    assert_eq!(code, 0);
    let once = serde_json::to_string(&v["result"]["document"]).unwrap();
    let (code, w, _) = coarsecat(&["normalize"], Some(&once), &[]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["document"], w["result"]["document"]);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn predicates_use_exit_codes() {
    let (code, v, _) = coarsecat(&["close", "--map", "idB", "--map", "swap"], Some(DOC), &[]);
    assert_eq!(code, 0, "{v}");
    let (code, v, _) = coarsecat(
        &["excisive", "--space", "X", "--set", "x,y", "--set", "z"],
        Some(DOC),
        &[],
    );
    assert_eq!(code, 0, "{v}");
    let (code, v, _) = coarsecat(
        &["excisive", "--space", "X", "--set", "x", "--set", "z"],
        Some(DOC),
        &[],
    );
    assert_eq!(code, 1, "{v}");
    assert_eq!(
        v["result"]["failure"],
        serde_json::json!({"kind": "not_covering", "point": "y"})
    );
    let (code, v, _) = coarsecat(&["exists-classical", "--space", "A", "--space", "A"], Some(DOC), &[]);
    assert_eq!(code, 0, "{v}");
    let (code, _, _) = coarsecat(&["exists-classical", "--space", "X"], Some(DOC), &[]);
    assert_eq!(code, 2);
}

#[test]
fn errors_exit_with_two() {
    let (code, v, _) = coarsecat(&["frobnicate"], None, &[]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "error");
    let (code, _, _) = coarsecat(&["product", "--space", "A"], Some("{ nope"), &[]);
    assert_eq!(code, 2);
    let (code, v, _) = coarsecat(&["validate"], Some(DOC), &[("COARSECAT_MAX_CARRIER", "2")]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["errors"][0]["kind"], "CapExceeded");
    let (code, _, out) = coarsecat(&["validate"], Some(DOC), &[("COARSECAT_MAX_CARRIER", "lots")]);
    assert_eq!(code, 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("COARSECAT_MAX_CARRIER"));
    let (code, v, _) = coarsecat(&["oracle", "--space", "A", "--test-cap", "7"], Some(DOC), &[]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["flag"], "--test-cap");
}
