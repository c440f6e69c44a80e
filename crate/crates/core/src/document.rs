//! The JSON interchange format for spaces, maps and diagrams.
//!
//! ```json
//! {
//!   "version": "1",
//!   "spaces": {
//!     "X": {"carrier": ["a", "b"], "coarse_generators": [["a", "b"]],
//!           "bounded_generators": [], "classical": false, "action": [["b", "a"]]},
//!     "N": {"symbolic": true, "bornology": "fin", "coarse": "band"}
//!   },
//!   "maps": {
//!     "f": {"dom": "X", "cod": "X", "table": {"a": "b", "b": "a"}},
//!     "g": {"dom": "N", "cod": "N", "exceptions": {"0": 1, "1": 0}, "tail": [2, 1, 0]}
//!   },
//!   "diagrams": {
//!     "D": {"objects": {"A": "X", "B": "X"}, "arrows": [{"src": "A", "dst": "B", "map": "f"}]}
//!   }
//! }
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::finite_space::{validate_morphism, GbcSpace, GroupAction, Morphism, SpaceError};
use crate::limits::Diagram;
use crate::relalg::{Carrier, PointMap, PointSet, Relation};
use crate::symnat::{validate_sym_morphism, Born, Coarse, SymDiagram, SymMap, SymSpace};

pub const FORMAT_VERSION: &str = "1";

/// Default bound on the size of a finite carrier.
pub const DEFAULT_MAX_CARRIER: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DocumentError {
    /// `line L, column C` for syntax errors, otherwise a path such as `spaces.X`.
    pub location: String,
    pub kind: &'static str,
    pub message: String,
}

impl std::fmt::Display for DocumentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} ({})", self.location, self.message, self.kind)
    }
}

fn error(location: impl Into<String>, kind: &'static str, message: impl Into<String>) -> DocumentError {
    DocumentError {
        location: location.into(),
        kind,
        message: message.into(),
    }
}

fn space_error_kind(e: &SpaceError) -> &'static str {
    match e {
        SpaceError::Rel(_) => "RelationError",
        SpaceError::Action(_) => "InvalidAction",
        SpaceError::IncompatibleStructures { .. } => "IncompatibleStructures",
        SpaceError::NonInvariantGenerator { .. } => "NonInvariantGenerator",
        SpaceError::NotAnEquivalence => "NotAnEquivalence",
        SpaceError::NotAnEntourage(..) => "NotAnEntourage",
        SpaceError::CapExceeded { .. } => "CapExceeded",
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpaceEntry {
    Finite(Arc<GbcSpace>),
    Symbolic(SymSpace),
}

#[derive(Clone, Debug)]
pub enum MapEntry {
    Finite {
        dom: String,
        cod: String,
        morphism: Morphism,
    },
    Symbolic {
        dom: String,
        cod: String,
        map: SymMap,
    },
}

impl MapEntry {
    pub fn dom(&self) -> &str {
        match self {
            MapEntry::Finite { dom, .. } | MapEntry::Symbolic { dom, .. } => dom,
        }
    }

    pub fn cod(&self) -> &str {
        match self {
            MapEntry::Finite { cod, .. } | MapEntry::Symbolic { cod, .. } => cod,
        }
    }
}

#[derive(Clone, Debug)]
pub enum BuiltDiagram {
    Finite(Diagram),
    Symbolic(SymDiagram),
}

#[derive(Clone, Debug)]
pub struct DiagramEntry {
    /// Object name and the space it is labelled by.
    pub objects: Vec<(String, String)>,
    /// Source object, target object and map name.
    pub arrows: Vec<(String, String, String)>,
    pub diagram: BuiltDiagram,
}

#[derive(Clone, Debug, Default)]
pub struct Document {
    pub version: String,
    pub spaces: IndexMap<String, SpaceEntry>,
    pub maps: IndexMap<String, MapEntry>,
    pub diagrams: IndexMap<String, DiagramEntry>,
}

impl Document {
    pub fn new() -> Self {
        Document {
            version: FORMAT_VERSION.to_string(),
            ..Default::default()
        }
    }

    pub fn finite_space(&self, name: &str) -> Result<&Arc<GbcSpace>, String> {
        match self.spaces.get(name) {
            Some(SpaceEntry::Finite(x)) => Ok(x),
            Some(SpaceEntry::Symbolic(_)) => Err(format!("space `{name}` is symbolic")),
            None => Err(format!("no space named `{name}`")),
        }
    }

    pub fn finite_map(&self, name: &str) -> Result<&Morphism, String> {
        match self.maps.get(name) {
            Some(MapEntry::Finite { morphism, .. }) => Ok(morphism),
            Some(MapEntry::Symbolic { .. }) => Err(format!("map `{name}` is symbolic")),
            None => Err(format!("no map named `{name}`")),
        }
    }

    pub fn diagram(&self, name: &str) -> Result<&BuiltDiagram, String> {
        self.diagrams
            .get(name)
            .map(|d| &d.diagram)
            .ok_or_else(|| format!("no diagram named `{name}`"))
    }

    /// The document in normal form.
    pub fn to_json(&self) -> Value {
        let spaces: Map<String, Value> = self
            .spaces
            .iter()
            .map(|(name, s)| {
                let v = match s {
                    SpaceEntry::Finite(x) => finite_space_json(x),
                    SpaceEntry::Symbolic(x) => sym_space_json(x),
                };
                (name.clone(), v)
            })
            .collect();
        let maps: Map<String, Value> = self
            .maps
            .iter()
            .map(|(name, m)| {
                let v = match m {
                    MapEntry::Finite { dom, cod, morphism } => {
                        let mut v = map_table_json(morphism.map());
                        v.insert("dom".into(), json!(dom));
                        v.insert("cod".into(), json!(cod));
                        v.sort_keys();
                        Value::Object(v)
                    }
                    MapEntry::Symbolic { dom, cod, map } => {
                        let mut v = sym_map_json(map);
                        v.insert("dom".into(), json!(dom));
                        v.insert("cod".into(), json!(cod));
                        v.sort_keys();
                        Value::Object(v)
                    }
                };
                (name.clone(), v)
            })
            .collect();
        let diagrams: Map<String, Value> = self
            .diagrams
            .iter()
            .map(|(name, d)| {
                let objects: Map<String, Value> = d.objects.iter().map(|(o, s)| (o.clone(), json!(s))).collect();
                let arrows: Vec<Value> = d
                    .arrows
                    .iter()
                    .map(|(s, t, m)| json!({"src": s, "dst": t, "map": m}))
                    .collect();
                (name.clone(), json!({"objects": objects, "arrows": arrows}))
            })
            .collect();
        json!({"version": self.version, "spaces": spaces, "maps": maps, "diagrams": diagrams})
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize")
    }
}

/// Normal-form description of a finite space: one generator pair per
/// non-least class member and one bornology generator for the bounded region.
pub fn finite_space_json(x: &GbcSpace) -> Value {
    let carrier = x.carrier();
    let mut coarse = Vec::new();
    for class in x.entourage().classes() {
        let mut members = class.iter();
        let first = members.next().expect("classes are nonempty");
        for y in members {
            coarse.push(json!([carrier.name(first), carrier.name(y)]));
        }
    }
    let classical = x.is_classical() && !x.is_empty();
    let bounded: Vec<Value> = if classical || x.bounded().is_empty() {
        Vec::new()
    } else {
        vec![json!(x.bounded().names())]
    };
    let mut v = Map::new();
    v.insert("carrier".into(), json!(carrier.names()));
    v.insert("coarse_generators".into(), Value::Array(coarse));
    v.insert("bounded_generators".into(), Value::Array(bounded));
    v.insert("classical".into(), json!(classical));
    if let Some(action) = x.action() {
        let gens: Vec<Value> = action
            .generators()
            .iter()
            .map(|g| json!(g.images().iter().map(|&y| carrier.name(y)).collect::<Vec<_>>()))
            .collect();
        v.insert("action".into(), Value::Array(gens));
    }
    Value::Object(v)
}

pub fn sym_space_json(x: &SymSpace) -> Value {
    let mut v = Map::new();
    v.insert("symbolic".into(), json!(true));
    let (born, f): (&str, Vec<u64>) = match x.born() {
        Born::Fin => ("fin", vec![]),
        Born::All => ("all", vec![]),
        Born::Triv => ("triv", vec![]),
        Born::FinCap(f) => ("fincap", f.iter().copied().collect()),
    };
    v.insert("bornology".into(), json!(born));
    if !f.is_empty() {
        v.insert("F".into(), json!(f));
    }
    let (coarse, r): (&str, Vec<[u64; 2]>) = match x.coarse() {
        Coarse::Diag => ("diag", vec![]),
        Coarse::Full => ("full", vec![]),
        Coarse::Band => ("band", vec![]),
        Coarse::FinGen(classes) => (
            "fingen",
            classes
                .iter()
                .flat_map(|c| {
                    let first = *c.first().expect("nonempty");
                    c.iter().skip(1).map(move |&y| [first, y])
                })
                .collect(),
        ),
    };
    v.insert("coarse".into(), json!(coarse));
    if !r.is_empty() {
        v.insert("R".into(), json!(r));
    }
    v.insert("tag".into(), json!(x.to_string()));
    Value::Object(v)
}

/// `{"table": {point: image}}`.
pub fn map_table_json(m: &PointMap) -> Map<String, Value> {
    let table: Map<String, Value> = (0..m.dom().len())
        .map(|x| (m.dom().name(x).to_string(), json!(m.cod().name(m.apply(x)))))
        .collect();
    let mut v = Map::new();
    v.insert("table".into(), Value::Object(table));
    v
}

pub fn sym_map_json(m: &SymMap) -> Map<String, Value> {
    let exceptions: Map<String, Value> = m
        .exceptions()
        .iter()
        .enumerate()
        .map(|(x, y)| (x.to_string(), json!(y)))
        .collect();
    let (n, a, b) = m.tail();
    let mut v = Map::new();
    v.insert("exceptions".into(), Value::Object(exceptions));
    v.insert("tail".into(), json!([n, a, b]));
    v
}

fn as_object<'a>(v: &'a Value, location: &str) -> Result<&'a Map<String, Value>, DocumentError> {
    v.as_object()
        .ok_or_else(|| error(location, "InvalidField", "expected an object"))
}

fn as_str<'a>(v: &'a Value, location: &str) -> Result<&'a str, DocumentError> {
    v.as_str()
        .ok_or_else(|| error(location, "InvalidField", "expected a string"))
}

fn string_list(v: &Value, location: &str) -> Result<Vec<String>, DocumentError> {
    let items = v
        .as_array()
        .ok_or_else(|| error(location, "InvalidField", "expected an array"))?;
    items.iter().map(|s| as_str(s, location).map(str::to_string)).collect()
}

fn u64_of(v: &Value, location: &str) -> Result<u64, DocumentError> {
    v.as_u64()
        .ok_or_else(|| error(location, "InvalidField", "expected a natural number"))
}

fn check_fields(obj: &Map<String, Value>, allowed: &[&str], location: &str) -> Result<(), DocumentError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(error(location, "UnknownField", format!("unknown field `{k}`"))),
        None => Ok(()),
    }
}

fn names_to_set(carrier: &Carrier, names: &[String], location: &str) -> Result<PointSet, DocumentError> {
    PointSet::from_names(carrier, names).map_err(|e| error(location, "UnknownElement", e.to_string()))
}

fn parse_finite_space(v: &Map<String, Value>, location: &str, max_carrier: usize) -> Result<GbcSpace, DocumentError> {
    check_fields(
        v,
        &[
            "carrier",
            "coarse_generators",
            "bounded_generators",
            "classical",
            "action",
        ],
        location,
    )?;
    let names = string_list(
        v.get("carrier")
            .ok_or_else(|| error(location, "MissingField", "missing field `carrier`"))?,
        &format!("{location}.carrier"),
    )?;
    if names.len() > max_carrier {
        return Err(error(
            location,
            "CapExceeded",
            format!(
                "carrier has {} points, above the cap {max_carrier}; raise it with COARSECAT_MAX_CARRIER",
                names.len()
            ),
        ));
    }
    let carrier =
        Carrier::new(names).map_err(|e| error(format!("{location}.carrier"), "DuplicateElement", e.to_string()))?;
    let mut coarse = Vec::new();
    if let Some(gens) = v.get("coarse_generators") {
        let at = format!("{location}.coarse_generators");
        for pair in gens
            .as_array()
            .ok_or_else(|| error(&at, "InvalidField", "expected an array"))?
        {
            let pair = string_list(pair, &at)?;
            if pair.len() != 2 {
                return Err(error(&at, "InvalidField", "generators are pairs [a, b]"));
            }
            let rel = Relation::from_named_pairs(&carrier, [(pair[0].as_str(), pair[1].as_str())])
                .map_err(|e| error(&at, "UnknownElement", e.to_string()))?;
            coarse.push(rel);
        }
    }
    let mut born = Vec::new();
    if let Some(gens) = v.get("bounded_generators") {
        let at = format!("{location}.bounded_generators");
        for set in gens
            .as_array()
            .ok_or_else(|| error(&at, "InvalidField", "expected an array"))?
        {
            born.push(names_to_set(&carrier, &string_list(set, &at)?, &at)?);
        }
    }
    let classical = match v.get("classical") {
        None => false,
        Some(b) => b
            .as_bool()
            .ok_or_else(|| error(format!("{location}.classical"), "InvalidField", "expected a boolean"))?,
    };
    let action = match v.get("action") {
        None => None,
        Some(gens) => {
            let at = format!("{location}.action");
            let mut perms = Vec::new();
            for g in gens
                .as_array()
                .ok_or_else(|| error(&at, "InvalidField", "expected an array"))?
            {
                let images = string_list(g, &at)?;
                if images.len() != carrier.len() {
                    return Err(error(
                        &at,
                        "InvalidAction",
                        "each generator lists one image per carrier point",
                    ));
                }
                let images = images
                    .iter()
                    .map(|n| {
                        carrier
                            .require(n)
                            .map_err(|e| error(&at, "UnknownElement", e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                perms.push(images);
            }
            Some(GroupAction::new(&carrier, perms).map_err(|e| error(&at, "InvalidAction", e.to_string()))?)
        }
    };
    GbcSpace::from_generators(&carrier, &coarse, &born, classical, action)
        .map_err(|e| error(location, space_error_kind(&e), e.to_string()))
}

fn parse_sym_space(v: &Map<String, Value>, location: &str) -> Result<SymSpace, DocumentError> {
    check_fields(v, &["symbolic", "bornology", "F", "coarse", "R", "tag"], location)?;
    let f: Vec<u64> = match v.get("F") {
        None => Vec::new(),
        Some(f) => f
            .as_array()
            .ok_or_else(|| error(format!("{location}.F"), "InvalidField", "expected an array"))?
            .iter()
            .map(|x| u64_of(x, &format!("{location}.F")))
            .collect::<Result<_, _>>()?,
    };
    let r: Vec<(u64, u64)> = match v.get("R") {
        None => Vec::new(),
        Some(r) => {
            let at = format!("{location}.R");
            r.as_array()
                .ok_or_else(|| error(&at, "InvalidField", "expected an array"))?
                .iter()
                .map(|p| match p.as_array().map(Vec::as_slice) {
                    Some([a, b]) => Ok((u64_of(a, &at)?, u64_of(b, &at)?)),
                    _ => Err(error(&at, "InvalidField", "pairs are [a, b]")),
                })
                .collect::<Result<_, _>>()?
        }
    };
    let tag = |key: &str| -> Result<String, DocumentError> {
        let at = format!("{location}.{key}");
        Ok(as_str(
            v.get(key)
                .ok_or_else(|| error(&at, "MissingField", format!("missing field `{key}`")))?,
            &at,
        )?
        .to_ascii_lowercase())
    };
    let born = match tag("bornology")?.as_str() {
        "fin" => Born::Fin,
        "all" => Born::All,
        "triv" => Born::Triv,
        "fincap" => Born::fin_cap(f),
        other => {
            return Err(error(
                format!("{location}.bornology"),
                "UnsupportedCombination",
                format!("unknown bornology `{other}`"),
            ))
        }
    };
    let coarse = match tag("coarse")?.as_str() {
        "diag" => Coarse::Diag,
        "full" => Coarse::Full,
        "band" => Coarse::Band,
        "fingen" => Coarse::fin_gen(r),
        other => {
            return Err(error(
                format!("{location}.coarse"),
                "UnsupportedCombination",
                format!("unknown coarse structure `{other}`"),
            ))
        }
    };
    SymSpace::new(born, coarse).map_err(|e| error(location, "Incompatible", e.to_string()))
}

fn parse_map(
    v: &Map<String, Value>,
    location: &str,
    spaces: &IndexMap<String, SpaceEntry>,
    declared: &Map<String, Value>,
) -> Result<Option<MapEntry>, DocumentError> {
    check_fields(v, &["dom", "cod", "table", "exceptions", "tail"], location)?;
    let end = |key: &str| -> Result<String, DocumentError> {
        let at = format!("{location}.{key}");
        Ok(as_str(
            v.get(key)
                .ok_or_else(|| error(&at, "MissingField", format!("missing field `{key}`")))?,
            &at,
        )?
        .to_string())
    };
    let (dom, cod) = (end("dom")?, end("cod")?);
    for name in [&dom, &cod] {
        if !declared.contains_key(name) {
            return Err(error(
                location,
                "UnresolvedReference",
                format!("unknown space `{name}`"),
            ));
        }
    }
    // A declared space that failed to parse has already been reported.
    let (Some(dom_space), Some(cod_space)) = (spaces.get(&dom), spaces.get(&cod)) else {
        return Ok(None);
    };
    match (dom_space, cod_space) {
        (SpaceEntry::Finite(x), SpaceEntry::Finite(y)) => {
            let at = format!("{location}.table");
            let table = as_object(
                v.get("table")
                    .ok_or_else(|| error(&at, "MissingField", "missing field `table`"))?,
                &at,
            )?;
            let mut images = vec![None; x.len()];
            for (k, image) in table {
                let i = x
                    .carrier()
                    .require(k)
                    .map_err(|e| error(&at, "UnknownElement", e.to_string()))?;
                let j = y
                    .carrier()
                    .require(as_str(image, &at)?)
                    .map_err(|e| error(&at, "UnknownElement", e.to_string()))?;
                images[i] = Some(j);
            }
            let images: Vec<usize> = images
                .into_iter()
                .enumerate()
                .map(|(i, j)| {
                    j.ok_or_else(|| error(&at, "MapLength", format!("no image for `{}`", x.carrier().name(i))))
                })
                .collect::<Result<_, _>>()?;
            let map =
                PointMap::new(x.carrier(), y.carrier(), images).map_err(|e| error(&at, "MapLength", e.to_string()))?;
            let morphism = validate_morphism(x, y, map).map_err(|violations| {
                let messages: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                error(location, "NotAMorphism", messages.join("; "))
            })?;
            Ok(Some(MapEntry::Finite { dom, cod, morphism }))
        }
        (SpaceEntry::Symbolic(x), SpaceEntry::Symbolic(y)) => {
            let at = format!("{location}.tail");
            let tail = v
                .get("tail")
                .and_then(Value::as_array)
                .ok_or_else(|| error(&at, "MissingField", "expected `tail`: [N, a, b]"))?;
            let [n, a, b] = tail.as_slice() else {
                return Err(error(&at, "InvalidField", "expected [N, a, b]"));
            };
            let (n, a) = (u64_of(n, &at)?, u64_of(a, &at)?);
            let b = b
                .as_i64()
                .ok_or_else(|| error(&at, "InvalidField", "offset must be an integer"))?;
            let mut exceptions: BTreeMap<u64, u64> = BTreeMap::new();
            if let Some(e) = v.get("exceptions") {
                let ex_at = format!("{location}.exceptions");
                for (k, y) in as_object(e, &ex_at)? {
                    let x: u64 = k
                        .parse()
                        .map_err(|_| error(&ex_at, "InvalidField", format!("`{k}` is not a natural number")))?;
                    exceptions.insert(x, u64_of(y, &ex_at)?);
                }
            }
            if exceptions.keys().copied().ne(0..n) {
                return Err(error(
                    format!("{location}.exceptions"),
                    "InvalidField",
                    format!("exceptions must cover exactly 0..{n}"),
                ));
            }
            let map = SymMap::with_tail(exceptions.into_values().collect(), n, a, b)
                .map_err(|e| error(&at, "InvalidField", e.to_string()))?;
            let verdict = validate_sym_morphism(x, y, &map);
            if !verdict.is_morphism() {
                return Err(error(location, "NotAMorphism", verdict.reasons.join("; ")));
            }
            Ok(Some(MapEntry::Symbolic { dom, cod, map }))
        }
        _ => Err(error(
            location,
            "MixedTiers",
            "a map cannot join a finite and a symbolic space",
        )),
    }
}

fn parse_diagram(
    v: &Map<String, Value>,
    location: &str,
    spaces: &IndexMap<String, SpaceEntry>,
    maps: &IndexMap<String, MapEntry>,
) -> Result<Option<DiagramEntry>, DocumentError> {
    check_fields(v, &["objects", "arrows"], location)?;
    let at = format!("{location}.objects");
    let mut objects = Vec::new();
    if let Some(o) = v.get("objects") {
        for (name, space) in as_object(o, &at)? {
            objects.push((name.clone(), as_str(space, &at)?.to_string()));
        }
    }
    let mut arrows = Vec::new();
    if let Some(a) = v.get("arrows") {
        let at = format!("{location}.arrows");
        for arrow in a
            .as_array()
            .ok_or_else(|| error(&at, "InvalidField", "expected an array"))?
        {
            let arrow = as_object(arrow, &at)?;
            check_fields(arrow, &["src", "dst", "map"], &at)?;
            let get = |k: &str| -> Result<String, DocumentError> {
                Ok(as_str(
                    arrow
                        .get(k)
                        .ok_or_else(|| error(&at, "MissingField", format!("missing field `{k}`")))?,
                    &at,
                )?
                .to_string())
            };
            arrows.push((get("src")?, get("dst")?, get("map")?));
        }
    }
    for (o, s) in &objects {
        if !spaces.contains_key(s) {
            return Err(error(
                &at,
                "UnresolvedReference",
                format!("object `{o}` refers to unknown space `{s}`"),
            ));
        }
    }
    let object_index = |name: &str| objects.iter().position(|(o, _)| o == name);
    let mut indexed = Vec::new();
    for (i, (s, t, m)) in arrows.iter().enumerate() {
        let at = format!("{location}.arrows[{i}]");
        let (Some(si), Some(ti)) = (object_index(s), object_index(t)) else {
            return Err(error(
                at,
                "UnresolvedReference",
                format!("unknown object in `{s} → {t}`"),
            ));
        };
        let Some(entry) = maps.get(m) else {
            return Err(error(at, "UnresolvedReference", format!("unknown map `{m}`")));
        };
        if entry.dom() != objects[si].1 || entry.cod() != objects[ti].1 {
            return Err(error(
                at,
                "ArrowMismatch",
                format!(
                    "map `{m}` goes {} → {}, not {} → {}",
                    entry.dom(),
                    entry.cod(),
                    objects[si].1,
                    objects[ti].1
                ),
            ));
        }
        indexed.push((si, ti, entry));
    }
    let finite = objects.iter().all(|(_, s)| matches!(spaces[s], SpaceEntry::Finite(_)));
    let symbolic = objects
        .iter()
        .all(|(_, s)| matches!(spaces[s], SpaceEntry::Symbolic(_)));
    let diagram = if finite {
        let objs = objects
            .iter()
            .map(|(o, s)| match &spaces[s] {
                SpaceEntry::Finite(x) => (o.clone(), x.clone()),
                SpaceEntry::Symbolic(_) => unreachable!("checked finite"),
            })
            .collect();
        let arrows = indexed
            .iter()
            .map(|(s, t, m)| match m {
                MapEntry::Finite { morphism, .. } => (*s, *t, morphism.clone()),
                MapEntry::Symbolic { .. } => unreachable!("finite spaces carry finite maps"),
            })
            .collect();
        BuiltDiagram::Finite(Diagram::new(objs, arrows).map_err(|e| error(location, "InvalidDiagram", e.to_string()))?)
    } else if symbolic {
        let objs = objects
            .iter()
            .map(|(o, s)| match &spaces[s] {
                SpaceEntry::Symbolic(x) => (o.clone(), x.clone()),
                SpaceEntry::Finite(_) => unreachable!("checked symbolic"),
            })
            .collect();
        let arrows = indexed
            .iter()
            .map(|(s, t, m)| match m {
                MapEntry::Symbolic { map, .. } => (*s, *t, map.clone()),
                MapEntry::Finite { .. } => unreachable!("symbolic spaces carry symbolic maps"),
            })
            .collect();
        BuiltDiagram::Symbolic(
            SymDiagram::new(objs, arrows).map_err(|e| error(location, "InvalidDiagram", e.to_string()))?,
        )
    } else {
        return Err(error(
            location,
            "MixedTiers",
            "a diagram cannot mix finite and symbolic spaces",
        ));
    };
    Ok(Some(DiagramEntry {
        objects,
        arrows,
        diagram,
    }))
}

/// Parses and validates a document, collecting every error found.
///
/// Entries that depend on an invalid entry are skipped rather than reported again.
pub fn parse(text: &str, max_carrier: usize) -> Result<Document, Vec<DocumentError>> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        vec![error(
            format!("line {}, column {}", e.line(), e.column()),
            "SyntaxError",
            e.to_string(),
        )]
    })?;
    let root = as_object(&root, "document").map_err(|e| vec![e])?;
    let mut errors = Vec::new();
    if let Err(e) = check_fields(root, &["version", "spaces", "maps", "diagrams"], "document") {
        errors.push(e);
    }
    let version = match root.get("version").and_then(Value::as_str) {
        Some(FORMAT_VERSION) => FORMAT_VERSION.to_string(),
        Some(other) => {
            return Err(vec![error(
                "version",
                "UnknownVersion",
                format!("unrecognized format version `{other}`"),
            )])
        }
        None => return Err(vec![error("version", "MissingField", "missing field `version`")]),
    };

    let section = |key: &str, errors: &mut Vec<DocumentError>| -> Vec<(String, Value)> {
        match root.get(key) {
            None => Vec::new(),
            Some(Value::Object(m)) => m.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            Some(_) => {
                errors.push(error(key, "InvalidField", "expected an object"));
                Vec::new()
            }
        }
    };
    let mut spaces = IndexMap::new();
    for (name, v) in section("spaces", &mut errors) {
        let location = format!("spaces.{name}");
        let parsed = as_object(&v, &location).and_then(|obj| {
            if obj.get("symbolic").and_then(Value::as_bool) == Some(true) {
                parse_sym_space(obj, &location).map(|x| Some(SpaceEntry::Symbolic(x)))
            } else {
                parse_finite_space(obj, &location, max_carrier).map(|x| Some(SpaceEntry::Finite(Arc::new(x))))
            }
        });
        if let Some(s) = collect(parsed, &mut errors) {
            spaces.insert(name, s);
        }
    }

    let empty = Map::new();
    let declared_spaces = root.get("spaces").and_then(Value::as_object).unwrap_or(&empty);
    let mut maps = IndexMap::new();
    for (name, v) in section("maps", &mut errors) {
        let location = format!("maps.{name}");
        let parsed = as_object(&v, &location).and_then(|obj| parse_map(obj, &location, &spaces, declared_spaces));
        if let Some(m) = collect(parsed, &mut errors) {
            maps.insert(name, m);
        }
    }

    let mut diagrams = IndexMap::new();
    for (name, v) in section("diagrams", &mut errors) {
        let location = format!("diagrams.{name}");
        let obj = match as_object(&v, &location) {
            Ok(o) => o,
            Err(e) => {
                errors.push(e);
                continue;
            }
        };
        // Skip diagrams built on entries that already failed.
        let depends_on_failure = obj.get("objects").and_then(Value::as_object).is_some_and(|o| {
            o.values()
                .filter_map(Value::as_str)
                .any(|s| section_has(root, "spaces", s) && !spaces.contains_key(s))
        }) || obj.get("arrows").and_then(Value::as_array).is_some_and(|a| {
            a.iter()
                .filter_map(|x| x.get("map").and_then(Value::as_str))
                .any(|m| section_has(root, "maps", m) && !maps.contains_key(m))
        });
        if depends_on_failure {
            continue;
        }
        if let Some(d) = collect(parse_diagram(obj, &location, &spaces, &maps), &mut errors) {
            diagrams.insert(name, d);
        }
    }

    if errors.is_empty() {
        Ok(Document {
            version,
            spaces,
            maps,
            diagrams,
        })
    } else {
        Err(errors)
    }
}

fn collect<T>(r: Result<Option<T>, DocumentError>, errors: &mut Vec<DocumentError>) -> Option<T> {
    match r {
        Ok(x) => x,
        Err(e) => {
            errors.push(e);
            None
        }
    }
}

fn section_has(root: &Map<String, Value>, key: &str, name: &str) -> bool {
    root.get(key)
        .and_then(Value::as_object)
        .is_some_and(|m| m.contains_key(name))
}

/// A document holding only the spaces and maps of one symbolic diagram.
pub fn sym_diagram_document(name: &str, d: &SymDiagram) -> Document {
    let mut doc = Document::new();
    let mut objects = Vec::new();
    for (o, x) in d.names().iter().zip(d.objects()) {
        doc.spaces.insert(o.clone(), SpaceEntry::Symbolic(x.clone()));
        objects.push((o.clone(), o.clone()));
    }
    let mut arrows = Vec::new();
    for (i, (s, t, f)) in d.arrows().iter().enumerate() {
        let map_name = format!("{}_{}_{i}", d.names()[*s], d.names()[*t]);
        doc.maps.insert(
            map_name.clone(),
            MapEntry::Symbolic {
                dom: d.names()[*s].clone(),
                cod: d.names()[*t].clone(),
                map: f.clone(),
            },
        );
        arrows.push((d.names()[*s].clone(), d.names()[*t].clone(), map_name));
    }
    doc.diagrams.insert(
        name.to_string(),
        DiagramEntry {
            objects,
            arrows,
            diagram: BuiltDiagram::Symbolic(d.clone()),
        },
    );
    doc
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "version": "1",
        "spaces": {
            "X": {"carrier": ["a", "b", "c"], "coarse_generators": [["a", "b"]], "bounded_generators": [["c"]]},
            "P": {"carrier": ["p"]},
            "N": {"symbolic": true, "bornology": "fin", "coarse": "band"}
        },
        "maps": {
            "f": {"dom": "X", "cod": "P", "table": {"a": "p", "b": "p", "c": "p"}},
            "s": {"dom": "N", "cod": "N", "exceptions": {"0": 1, "1": 0}, "tail": [2, 1, 0]}
        },
        "diagrams": {
            "D": {"objects": {"A": "X", "B": "P"}, "arrows": [{"src": "A", "dst": "B", "map": "f"}]}
        }
    }"#;

    #[test]
    fn round_trip_is_idempotent() {
        let doc = parse(SAMPLE, DEFAULT_MAX_CARRIER).unwrap();
        let once = doc.to_string_pretty();
        let twice = parse(&once, DEFAULT_MAX_CARRIER).unwrap().to_string_pretty();
        assert_eq!(once, twice);
        assert!(matches!(doc.diagrams["D"].diagram, BuiltDiagram::Finite(_)));
    }

    #[test]
    fn max_empty_parses_to_no_bounded_points() {
        let text = r#"{"version": "1", "spaces": {"X": {"carrier": ["0", "1", "2"],
            "coarse_generators": [["0", "1"], ["1", "2"]]}}}"#;
        let doc = parse(text, DEFAULT_MAX_CARRIER).unwrap();
        let x = doc.finite_space("X").unwrap();
        assert!(x.bounded().is_empty());
        assert_eq!(x.entourage().len(), 9);
    }

    #[test]
    fn incompatible_generators_echo_the_witness() {
        let text = r#"{"version": "1", "spaces": {"X": {"carrier": ["a", "b"],
            "coarse_generators": [["a", "b"]], "bounded_generators": [["a"]]}}}"#;
        let errors = parse(text, DEFAULT_MAX_CARRIER).unwrap_err();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].kind, "IncompatibleStructures");
        assert_eq!(errors[0].location, "spaces.X");
        assert!(errors[0].message.contains("`b`"));
    }

    #[test]
    fn syntax_errors_are_located() {
        let errors = parse("{\n  \"version\": \"1\",\n  \"spaces\": {,}\n}", 64).unwrap_err();
        assert_eq!(errors[0].kind, "SyntaxError");
        assert!(errors[0].location.starts_with("line 3"));
    }

    #[test]
    fn errors_are_collected_without_cascades() {
        let text = r#"{"version": "1",
            "spaces": {"X": {"carrier": ["a", "a"]}, "Y": {"carrier": ["y"]}},
            "maps": {"f": {"dom": "X", "cod": "Y", "table": {}}, "g": {"dom": "Z", "cod": "Y", "table": {}}},
            "diagrams": {"D": {"objects": {"A": "X"}}, "E": {"objects": {"A": "W"}}}}"#;
        let errors = parse(text, 64).unwrap_err();
        let kinds: Vec<&str> = errors.iter().map(|e| e.kind).collect();
        assert_eq!(
            kinds,
            vec!["DuplicateElement", "UnresolvedReference", "UnresolvedReference"]
        );
    }

    #[test]
    fn carrier_cap_and_version() {
        let text = r#"{"version": "1", "spaces": {"X": {"carrier": ["a", "b", "c"]}}}"#;
        let errors = parse(text, 2).unwrap_err();
        assert_eq!(errors[0].kind, "CapExceeded");
        assert!(errors[0].message.contains("COARSECAT_MAX_CARRIER"));
        assert_eq!(parse(r#"{"version": "9"}"#, 2).unwrap_err()[0].kind, "UnknownVersion");
    }

    #[test]
    fn symbolic_round_trip() {
        let d = crate::symnat::fixtures::exa_n();
        let doc = sym_diagram_document("exa_N", &d);
        let text = doc.to_string_pretty();
        let back = parse(&text, 64).unwrap();
        match &back.diagrams["exa_N"].diagram {
            BuiltDiagram::Symbolic(s) => assert_eq!(s, &d),
            BuiltDiagram::Finite(_) => panic!("expected a symbolic diagram"),
        }
    }
}
