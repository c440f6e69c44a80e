//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every function takes and returns JSON text so the page needs no glue
//! beyond `JSON.parse`.

use coarsecat::commands::{run, Options, Report};
use coarsecat::limits::Side;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Carrier cap for documents typed into the page.
const MAX_CARRIER: usize = 12;

fn report(r: Report) -> String {
    let mut json = r.json;
    json["exit"] = json!(r.exit);
    serde_json::to_string_pretty(&json).expect("JSON values serialize")
}

fn options() -> Options {
    Options {
        max_carrier: MAX_CARRIER,
        ..Options::default()
    }
}

/// Normal form, coarse components and bounded/unbounded split of one space.
#[wasm_bindgen]
pub fn inspect_space(document: &str, space: &str) -> String {
    let opts = Options {
        spaces: vec![space.to_string()],
        ..options()
    };
    let components = run("components", Some(document), &opts);
    if components.exit != 0 {
        return report(components);
    }
    let split = run("split", Some(document), &opts);
    if split.exit != 0 {
        return report(split);
    }
    let flasque = run("flasque", Some(document), &opts);
    let json = json!({
        "command": "inspect",
        "status": "true",
        "exit": 0,
        "components": components.json["result"],
        "split": split.json["result"],
        "flasque": flasque.json.get("result").unwrap_or(&flasque.json["error"]),
    });
    serde_json::to_string_pretty(&json).expect("JSON values serialize")
}

/// Limit or colimit of a named diagram, checked against the universal
/// property with test objects of up to `test_cap` points.
#[wasm_bindgen]
pub fn universal_check(document: &str, diagram: &str, colimit: bool, test_cap: usize) -> String {
    let opts = Options {
        diagram: Some(diagram.to_string()),
        side: if colimit { Side::Colimit } else { Side::Limit },
        test_cap,
        ..options()
    };
    report(run("oracle", Some(document), &opts))
}

/// Colimit admissibility of a named diagram, or of a bundled symbolic
/// fixture (`exa_N`, `ex_PO`) when `document` is empty.
#[wasm_bindgen]
pub fn admissibility(document: &str, diagram: &str) -> String {
    let fixture = document.trim().is_empty();
    let opts = Options {
        diagram: (!fixture).then(|| diagram.to_string()),
        fixture: fixture.then(|| diagram.to_string()),
        ..options()
    };
    let input = (!fixture).then_some(document);
    report(run("admissible", input, &opts))
}
