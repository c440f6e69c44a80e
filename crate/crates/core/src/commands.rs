//! Batch commands over documents, producing JSON reports.
//!
//! Exit codes: `0` computed and true, `1` computed and false (with a
//! witness in the report), `2` error.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::coarse_homotopy::{
    far_point, is_coarsely_excisive, is_equivalence, is_flasque, is_nice, DEFAULT_SEARCH_CAP,
};
use crate::document::{
    finite_space_json, map_table_json, parse, sym_diagram_document, sym_space_json, BuiltDiagram, Document,
    DEFAULT_MAX_CARRIER,
};
use crate::finite_space::{tensor, GbcSpace, Morphism};
use crate::limits::{
    self, admissible, colimit, coproduct, equalizer, exists_in_classical, limit, mutate::mutants, product, pullback,
    universal_property_check, Cone, Diagram, Side, Verdict, MAX_TEST_CAP,
};
use crate::relalg::{PointMap, PointSet};
use crate::symnat::{fixtures, sym_admissible, sym_identity_colimit};

pub const COMMANDS: &[&str] = &[
    "validate",
    "normalize",
    "product",
    "coproduct",
    "equalizer",
    "coequalizer",
    "limit",
    "colimit",
    "tensor",
    "pullback",
    "components",
    "split",
    "flasque",
    "close",
    "equivalent",
    "excisive",
    "nice",
    "admissible",
    "exists-classical",
    "oracle",
];

pub const DEFAULT_TEST_CAP: usize = 3;

#[derive(Clone, Debug)]
pub struct Options {
    pub spaces: Vec<String>,
    pub maps: Vec<String>,
    pub diagram: Option<String>,
    /// Point sets, as comma-separated names or a JSON array of names.
    pub sets: Vec<String>,
    pub side: Side,
    pub fixture: Option<String>,
    pub test_cap: usize,
    pub search_cap: usize,
    /// Number of sampled mutants the `oracle` command must see rejected.
    pub mutants: usize,
    pub seed: u64,
    pub max_carrier: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            spaces: Vec::new(),
            maps: Vec::new(),
            diagram: None,
            sets: Vec::new(),
            side: Side::Limit,
            fixture: None,
            test_cap: DEFAULT_TEST_CAP,
            search_cap: DEFAULT_SEARCH_CAP,
            mutants: 0,
            seed: 0,
            max_carrier: DEFAULT_MAX_CARRIER,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub exit: i32,
    pub json: Value,
}

impl Report {
    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("JSON values serialize")
    }
}

type Outcome = Result<(bool, Value), Value>;

fn err(message: impl Into<String>) -> Value {
    json!({"message": message.into()})
}

/// Runs `command` on the document text (an empty document when `None`).
pub fn run(command: &str, input: Option<&str>, opts: &Options) -> Report {
    let outcome = if !COMMANDS.contains(&command) {
        Err(json!({"message": format!("unknown command `{command}`"), "commands": COMMANDS}))
    } else if command == "validate" {
        match parse(input.unwrap_or(r#"{"version": "1"}"#), opts.max_carrier) {
            Ok(doc) => Ok((
                true,
                json!({
                    "valid": true,
                    "spaces": doc.spaces.keys().collect::<Vec<_>>(),
                    "maps": doc.maps.keys().collect::<Vec<_>>(),
                    "diagrams": doc.diagrams.keys().collect::<Vec<_>>(),
                }),
            )),
            Err(errors) => Ok((false, json!({"valid": false, "errors": errors}))),
        }
    } else {
        load(input, opts).and_then(|doc| dispatch(command, &doc, opts))
    };
    let (exit, status, body) = match outcome {
        Ok((true, v)) => (0, "true", ("result", v)),
        Ok((false, v)) => (1, "false", ("result", v)),
        Err(v) => (2, "error", ("error", v)),
    };
    let mut out = Map::new();
    out.insert("command".into(), json!(command));
    out.insert("status".into(), json!(status));
    out.insert(body.0.into(), body.1);
    Report {
        exit,
        json: Value::Object(out),
    }
}

fn load(input: Option<&str>, opts: &Options) -> Result<Document, Value> {
    let mut doc = match input {
        Some(text) => {
            parse(text, opts.max_carrier).map_err(|errors| json!({"message": "invalid document", "errors": errors}))?
        }
        None => Document::new(),
    };
    if let Some(name) = &opts.fixture {
        let d = fixtures::by_name(name)
            .ok_or_else(|| err(format!("unknown fixture `{name}` (expected exa_N or ex_PO)")))?;
        let fixture = sym_diagram_document(name, &d);
        doc.spaces.extend(fixture.spaces);
        doc.maps.extend(fixture.maps);
        doc.diagrams.extend(fixture.diagrams);
    }
    Ok(doc)
}

fn dispatch(command: &str, doc: &Document, opts: &Options) -> Outcome {
    if opts.test_cap > MAX_TEST_CAP {
        return Err(json!({
            "message": format!("test object size {} exceeds the cap {MAX_TEST_CAP}", opts.test_cap),
            "cap": MAX_TEST_CAP,
            "flag": "--test-cap",
        }));
    }
    match command {
        "normalize" => Ok((true, json!({"document": doc.to_json()}))),
        "product" => cone_report(product(&spaces(doc, opts)?).map_err(to_err)?, &opts.spaces),
        "coproduct" => cone_report(coproduct(&spaces(doc, opts)?), &opts.spaces),
        "tensor" => {
            let [x, y] = exactly::<2, _>(spaces(doc, opts)?, "tensor takes two --space arguments")?;
            Ok((true, json!({"space": finite_space_json(&tensor(&x, &y))})))
        }
        "equalizer" | "coequalizer" | "pullback" => {
            let [f, g] = exactly::<2, _>(maps(doc, opts)?, "this command takes two --map arguments")?;
            let cone = match command {
                "equalizer" => equalizer(&f, &g),
                "coequalizer" => limits::coequalizer(&f, &g),
                _ => pullback(&f, &g),
            }
            .map_err(to_err)?;
            let (f_dom, f_cod) = ends(doc, &opts.maps[0]);
            let names = match command {
                "pullback" => vec![f_dom, ends(doc, &opts.maps[1]).0, f_cod],
                _ => vec![f_dom, f_cod],
            };
            cone_report(cone, &names)
        }
        "limit" | "colimit" => match diagram(doc, opts)? {
            BuiltDiagram::Finite(d) => {
                let cone = if command == "limit" {
                    limit(&d).map_err(to_err)?
                } else {
                    colimit(&d)
                };
                cone_report(cone, d.names())
            }
            BuiltDiagram::Symbolic(d) if command == "colimit" => {
                let apex = sym_identity_colimit(&d).map_err(to_err)?;
                Ok((true, json!({"apex": sym_space_json(&apex), "tag": apex.to_string()})))
            }
            BuiltDiagram::Symbolic(_) => Err(err("symbolic limits are not supported")),
        },
        "components" => {
            let x = single_space(doc, opts)?;
            let components = x.components();
            let classes: Vec<Vec<String>> = components.classes.iter().map(|c| c.names()).collect();
            Ok((
                true,
                json!({"count": components.count(), "connected": components.is_connected(), "classes": classes}),
            ))
        }
        "split" => {
            let x = single_space(doc, opts)?;
            let s = x.split().map_err(to_err)?;
            Ok((
                true,
                json!({
                    "bounded_part": finite_space_json(&s.bounded_part),
                    "unbounded_part": finite_space_json(&s.unbounded_part),
                    "coproduct": finite_space_json(&s.coproduct),
                    "to_coproduct": map_table_json(s.to_coproduct.map()),
                    "from_coproduct": map_table_json(s.from_coproduct.map()),
                }),
            ))
        }
        "flasque" => {
            let x = single_space(doc, opts)?;
            let witness = match opts.maps.as_slice() {
                [] => None,
                [m] => Some(doc.finite_map(m).map_err(err)?.clone()),
                _ => return Err(err("flasque takes at most one --map witness")),
            };
            let v = is_flasque(&x, witness.as_ref(), opts.search_cap)
                .map_err(|e| json!({"message": e.to_string(), "cap": opts.search_cap, "flag": "--search-cap"}))?;
            Ok((
                v.flasque,
                json!({
                    "flasque": v.flasque,
                    "witness": v.witness.as_ref().map(|w| map_table_json(w.map())),
                    "eventual_k": v.eventual_k,
                    "failure": v.failure,
                }),
            ))
        }
        "close" => {
            let [f, g] = exactly::<2, _>(maps(doc, opts)?, "close takes two --map arguments")?;
            let far = far_point(&f, &g).map_err(to_err)?;
            let name = far.map(|x| f.dom().carrier().name(x).to_string());
            Ok((far.is_none(), json!({"close": far.is_none(), "far_point": name})))
        }
        "equivalent" => {
            let [f] = exactly::<1, _>(maps(doc, opts)?, "equivalent takes one --map argument")?;
            let v = is_equivalence(&f).map_err(to_err)?;
            Ok((
                v.equivalence,
                json!({"equivalence": v.equivalence, "inverse": v.inverse.as_ref().map(|i| map_table_json(i.map()))}),
            ))
        }
        "nice" => {
            let x = single_space(doc, opts)?;
            let [a] = exactly::<1, _>(sets(&x, opts)?, "nice takes one --set argument")?;
            let v = is_nice(&x, &a).map_err(to_err)?;
            let failing = v.failing_entourage.as_ref().map(|u| u.named_pairs());
            Ok((
                v.nice,
                json!({"nice": v.nice, "failing_entourage": failing, "entourages_checked": v.entourages_checked, "exhaustive": v.exhaustive}),
            ))
        }
        "excisive" => {
            let x = single_space(doc, opts)?;
            let [y, z] = exactly::<2, _>(sets(&x, opts)?, "excisive takes two --set arguments")?;
            let v = is_coarsely_excisive(&x, &y, &z).map_err(to_err)?;
            Ok((v.excisive, json!({"excisive": v.excisive, "failure": v.failure})))
        }
        "admissible" => match diagram(doc, opts)? {
            BuiltDiagram::Finite(d) => {
                let r = admissible(&d).map_err(to_err)?;
                Ok((r.admissible, serde_json::to_value(&r).expect("serializable")))
            }
            BuiltDiagram::Symbolic(d) => {
                let r = sym_admissible(&d).map_err(to_err)?;
                let mut v = serde_json::to_value(&r).expect("serializable");
                if let Some(w) = &r.witness {
                    v["witness"]["preimage"] = json!(w.preimage.to_string());
                }
                Ok((r.admissible, v))
            }
        },
        "exists-classical" => {
            let d = finite_diagram(doc, opts)?;
            let r = exists_in_classical(&d, opts.side).map_err(to_err)?;
            Ok((
                r.exists,
                json!({"exists": r.exists, "side": opts.side, "unbounded_point": r.unbounded_point, "apex": finite_space_json(&r.cone.apex)}),
            ))
        }
        "oracle" => oracle(&finite_diagram(doc, opts)?, opts),
        _ => unreachable!("command list checked"),
    }
}

fn oracle(d: &Diagram, opts: &Options) -> Outcome {
    let cone = match opts.side {
        Side::Limit => limit(d).map_err(to_err)?,
        Side::Colimit => colimit(d),
    };
    let legs: Vec<PointMap> = cone.legs.iter().map(|l| l.map().clone()).collect();
    let verdict = universal_property_check(&cone.apex, &legs, d, opts.side, opts.test_cap).map_err(to_err)?;
    let mut body = json!({
        "side": opts.side,
        "test_cap": opts.test_cap,
        "apex": finite_space_json(&cone.apex),
        "verdict": verdict_json(&verdict),
    });
    let mut ok = verdict.is_pass();
    if opts.mutants > 0 {
        let mut all = mutants(&cone, opts.side);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        all.shuffle(&mut rng);
        all.truncate(opts.mutants);
        let mut survivors = Vec::new();
        for m in &all {
            let v = universal_property_check(&m.apex, &m.legs, d, opts.side, opts.test_cap).map_err(to_err)?;
            if v.is_pass() {
                survivors.push(m.description.clone());
            }
        }
        ok &= survivors.is_empty();
        body["mutants"] = json!({"checked": all.len(), "seed": opts.seed, "survivors": survivors});
    }
    Ok((ok, body))
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Pass => json!({"pass": true}),
        Verdict::InvalidCandidate(reason) => json!({"pass": false, "invalid_candidate": reason}),
        Verdict::Counterexample(c) => json!({
            "pass": false,
            "test_object": finite_space_json(&c.test_object),
            "cone": c.cone.iter().map(map_table_json).collect::<Vec<_>>(),
            "mediators": c.mediators.iter().map(map_table_json).collect::<Vec<_>>(),
        }),
    }
}

fn cone_report<S: AsRef<str>>(cone: Cone, names: &[S]) -> Outcome {
    let legs: Vec<Value> = cone
        .legs
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let mut v = map_table_json(l.map());
            let name = names.get(i).map_or_else(|| i.to_string(), |s| s.as_ref().to_string());
            v.insert("object".into(), json!(name));
            Value::Object(v)
        })
        .collect();
    Ok((true, json!({"apex": finite_space_json(&cone.apex), "legs": legs})))
}

fn to_err<E: std::fmt::Display>(e: E) -> Value {
    err(e.to_string())
}

fn exactly<const N: usize, T>(items: Vec<T>, message: &str) -> Result<[T; N], Value> {
    items.try_into().map_err(|_| err(message))
}

/// Domain and codomain space names of a map in the document.
fn ends(doc: &Document, map: &str) -> (String, String) {
    doc.maps
        .get(map)
        .map_or_else(Default::default, |m| (m.dom().to_string(), m.cod().to_string()))
}

fn spaces(doc: &Document, opts: &Options) -> Result<Vec<Arc<GbcSpace>>, Value> {
    opts.spaces
        .iter()
        .map(|s| doc.finite_space(s).cloned().map_err(err))
        .collect()
}

fn single_space(doc: &Document, opts: &Options) -> Result<Arc<GbcSpace>, Value> {
    match opts.spaces.as_slice() {
        [s] => doc.finite_space(s).cloned().map_err(err),
        _ => Err(err("this command takes one --space argument")),
    }
}

fn maps(doc: &Document, opts: &Options) -> Result<Vec<Morphism>, Value> {
    opts.maps
        .iter()
        .map(|m| doc.finite_map(m).cloned().map_err(err))
        .collect()
}

fn sets(x: &GbcSpace, opts: &Options) -> Result<Vec<PointSet>, Value> {
    opts.sets
        .iter()
        .map(|s| {
            let names: Vec<String> = if s.trim_start().starts_with('[') {
                serde_json::from_str(s).map_err(|e| err(format!("bad --set `{s}`: {e}")))?
            } else if s.is_empty() {
                Vec::new()
            } else {
                s.split(',').map(|n| n.trim().to_string()).collect()
            };
            PointSet::from_names(x.carrier(), &names).map_err(to_err)
        })
        .collect()
}

/// The diagram named by `--diagram`, else the fixture, else the discrete
/// diagram on the `--space` arguments.
fn diagram(doc: &Document, opts: &Options) -> Result<BuiltDiagram, Value> {
    if let Some(name) = opts.diagram.as_ref().or(opts.fixture.as_ref()) {
        return doc.diagram(name).cloned().map_err(err);
    }
    let spaces = spaces(doc, opts)?;
    let names = opts.spaces.iter().enumerate().map(|(i, s)| format!("{i}:{s}"));
    let d = Diagram::new(names.zip(spaces).collect(), vec![]).map_err(to_err)?;
    Ok(BuiltDiagram::Finite(d))
}

fn finite_diagram(doc: &Document, opts: &Options) -> Result<Diagram, Value> {
    match diagram(doc, opts)? {
        BuiltDiagram::Finite(d) => Ok(d),
        BuiltDiagram::Symbolic(_) => Err(err("this command needs a finite diagram")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> Options {
        Options::default()
    }

    const DOC: &str = r#"{"version": "1", "spaces": {
        "A": {"carrier": ["0", "1"], "classical": true},
        "B": {"carrier": ["u"]}
    }}"#;

    #[test]
    fn fixtures_through_commands() {
        let o = Options {
            fixture: Some("exa_N".into()),
            ..opts()
        };
        let r = run("admissible", None, &o);
        assert_eq!(r.exit, 1);
        assert_eq!(r.json["result"]["witness"]["preimage"], "ℕ");
        assert_eq!(r.json["result"]["witness"]["chain"][0]["object"], "N_max,max");
        let o = Options {
            fixture: Some("ex_PO".into()),
            ..opts()
        };
        let r = run("colimit", None, &o);
        assert_eq!(r.exit, 0);
        assert_eq!(r.json["result"]["tag"], "(Triv, Full)");
    }

    #[test]
    fn oracle_on_a_product() {
        let o = Options {
            spaces: vec!["A".into(), "B".into()],
            mutants: 5,
            seed: 7,
            ..opts()
        };
        let r = run("oracle", Some(DOC), &o);
        assert_eq!(r.exit, 0, "{}", r.to_pretty());
        assert_eq!(r.json["result"]["mutants"]["checked"], 5);
        assert_eq!(run("oracle", Some(DOC), &o), r);
    }

    #[test]
    fn error_and_false_codes() {
        assert_eq!(run("frobnicate", None, &opts()).exit, 2);
        assert_eq!(run("validate", Some("{"), &opts()).exit, 1);
        assert_eq!(run("product", Some("{"), &opts()).exit, 2);
        let big = Options {
            spaces: vec!["A".into()],
            test_cap: 9,
            ..opts()
        };
        let r = run("oracle", Some(DOC), &big);
        assert_eq!(r.exit, 2);
        assert_eq!(r.json["error"]["flag"], "--test-cap");
        let x = Options {
            spaces: vec!["B".into()],
            ..opts()
        };
        assert_eq!(run("flasque", Some(DOC), &x).exit, 0);
        let a = Options {
            spaces: vec!["A".into()],
            ..opts()
        };
        assert_eq!(run("flasque", Some(DOC), &a).exit, 1);
        let nice = Options {
            spaces: vec!["A".into()],
            sets: vec!["0".into()],
            ..opts()
        };
        assert_eq!(run("nice", Some(DOC), &nice).exit, 0);
    }

    #[test]
    fn classical_existence_of_the_empty_limit() {
        let d = r#"{"version": "1", "diagrams": {"E": {"objects": {}}}}"#;
        let o = Options {
            diagram: Some("E".into()),
            ..opts()
        };
        let r = run("exists-classical", Some(d), &o);
        assert_eq!(r.exit, 1);
        assert_eq!(r.json["result"]["unbounded_point"], "()");
    }
}
