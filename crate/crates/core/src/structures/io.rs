//! JSON encoding of structures:
//!
//! ```json
//! {"signature": {"relations": {"E": 2, "P": 1}, "transitions": ["E"]},
//!  "universe": ["a", "b"], "relations": {"E": [["a", "b"]]}, "basepoints": ["a"]}
//! ```
//!
//! The number of constants is the length of `basepoints`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{Signature, Structure, StructureError};

pub fn from_json(text: &str) -> Result<Structure, StructureError> {
    let value: Value = serde_json::from_str(text).map_err(|e| StructureError::Json(e.to_string()))?;
    from_json_value(&value)
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, StructureError> {
    v.as_object()
        .ok_or_else(|| StructureError::invalid(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, StructureError> {
    v.as_array()
        .ok_or_else(|| StructureError::invalid(path, "expected an array"))
}

fn string(v: &Value, path: &str) -> Result<String, StructureError> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| StructureError::invalid(path, "expected a string"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, StructureError> {
    obj.get(key).ok_or_else(|| {
        let p = if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
        StructureError::invalid(p, "missing field")
    })
}

pub fn from_json_value(value: &Value) -> Result<Structure, StructureError> {
    let root = object(value, "$")?;
    let sig = object(field(root, "signature", "")?, "signature")?;
    let mut rels = Vec::new();
    for (name, arity) in object(field(sig, "relations", "signature")?, "signature.relations")? {
        let a = arity.as_u64().ok_or_else(|| {
            StructureError::invalid(format!("signature.relations.{name}"), "arity must be a positive integer")
        })?;
        rels.push((name.clone(), a as usize));
    }
    let mut transitions = Vec::new();
    if let Some(t) = sig.get("transitions") {
        for (i, v) in array(t, "signature.transitions")?.iter().enumerate() {
            transitions.push(string(v, &format!("signature.transitions[{i}]"))?);
        }
    }
    let basepoints: Vec<String> = match root.get("basepoints") {
        None => Vec::new(),
        Some(b) => array(b, "basepoints")?
            .iter()
            .enumerate()
            .map(|(i, v)| string(v, &format!("basepoints[{i}]")))
            .collect::<Result<_, _>>()?,
    };
    let signature = Signature::new(rels, transitions, basepoints.len())?;
    let universe: Vec<String> = array(field(root, "universe", "")?, "universe")?
        .iter()
        .enumerate()
        .map(|(i, v)| string(v, &format!("universe[{i}]")))
        .collect::<Result<_, _>>()?;
    let mut relations: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
    if let Some(r) = root.get("relations") {
        for (name, tuples) in object(r, "relations")? {
            let mut ts = Vec::new();
            for (ti, t) in array(tuples, &format!("relations.{name}"))?.iter().enumerate() {
                let tp = format!("relations.{name}[{ti}]");
                let tuple = array(t, &tp)?
                    .iter()
                    .enumerate()
                    .map(|(ei, e)| string(e, &format!("{tp}[{ei}]")))
                    .collect::<Result<_, _>>()?;
                ts.push(tuple);
            }
            relations.insert(name.clone(), ts);
        }
    }
    Structure::new(signature, universe, relations, basepoints)
}

pub fn to_json_value(s: &Structure) -> Value {
    let sig = s.signature();
    let names = |t: &Vec<usize>| -> Vec<&str> { t.iter().map(|&e| s.name(e)).collect() };
    let relations: Map<String, Value> = s
        .relations()
        .iter()
        .map(|(r, ts)| (r.clone(), json!(ts.iter().map(names).collect::<Vec<_>>())))
        .collect();
    json!({
        "signature": {
            "relations": sig.relations(),
            "transitions": sig.transitions(),
        },
        "universe": s.universe(),
        "relations": relations,
        "basepoints": s.basepoints().iter().map(|&b| s.name(b)).collect::<Vec<_>>(),
    })
}

pub fn to_json(s: &Structure) -> String {
    serde_json::to_string_pretty(&to_json_value(s)).expect("structure serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip() {
        for s in [fixtures::path3(), fixtures::c2(), fixtures::bounded_two_constants()] {
            assert_eq!(from_json(&to_json(&s)).unwrap(), s);
        }
    }

    fn err_path(text: &str) -> String {
        match from_json(text).unwrap_err() {
            StructureError::Invalid { path, .. } => path,
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn reports_first_violation_with_path() {
        let base = r#"{"signature":{"relations":{"E":2},"transitions":["E"]},"universe":["a","b"],"#;
        assert_eq!(
            err_path(&format!(r#"{base}"relations":{{"E":[["a","z"]]}},"basepoints":["a"]}}"#)),
            "relations.E[0][1]"
        );
        assert_eq!(
            err_path(&format!(r#"{base}"relations":{{"E":[["a"]]}},"basepoints":["a"]}}"#)),
            "relations.E[0]"
        );
        assert_eq!(
            err_path(&format!(r#"{base}"relations":{{}},"basepoints":["q"]}}"#)),
            "basepoints[0]"
        );
        assert_eq!(
            err_path(r#"{"signature":{"relations":{"I":2}},"universe":[]}"#),
            "signature.relations.I"
        );
        assert_eq!(
            err_path(r#"{"signature":{"relations":{"P":1},"transitions":["P"]},"universe":[]}"#),
            "signature.transitions[0]"
        );
        assert_eq!(err_path(r#"{"universe":[]}"#), "signature");
    }

    #[test]
    fn syntax_errors_are_json_errors() {
        assert!(matches!(from_json("{"), Err(StructureError::Json(_))));
    }
}
