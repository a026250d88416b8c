//! The versioned JSON schemas for every document `pif` reads or writes, and
//! a checker for the keyword subset they use.
//!
//! Supported keywords: `type`, `enum`, `const`, `minimum`, `minItems`,
//! `maxItems`, `properties`, `required`, `additionalProperties`, `items`,
//! `anyOf` and local `$ref`s of the form `#/$defs/name`.

use std::fmt;

use serde_json::Value;
use thiserror::Error;

/// Schema documents, keyed by name. The version is part of each `$id`.
pub const SCHEMAS: &[(&str, &str)] = &[
    ("env", include_str!("../schemas/env.v1.json")),
    ("trace", include_str!("../schemas/trace.v1.json")),
    ("translation", include_str!("../schemas/translation.v1.json")),
    ("realizer", include_str!("../schemas/realizer.v1.json")),
    ("report", include_str!("../schemas/report.v1.json")),
    ("epsilon", include_str!("../schemas/epsilon.v1.json")),
    ("learn", include_str!("../schemas/learn.v1.json")),
    ("transcript", include_str!("../schemas/transcript.v1.json")),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("no schema named `{0}`")]
    Unknown(String),
    #[error("schema `{0}` is not valid JSON: {1}")]
    BadSchema(String, String),
    #[error("unresolvable reference `{0}`")]
    BadRef(String),
    #[error("document does not match schema `{schema}`: {violations}")]
    Invalid { schema: String, violations: Violations },
}

/// One mismatch, located by a JSON pointer into the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let path = if v.path.is_empty() { "/" } else { &v.path };
            write!(f, "{path}: {}", v.message)?;
        }
        Ok(())
    }
}

pub fn schema(name: &str) -> Result<Value, SchemaError> {
    let (_, text) = SCHEMAS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| SchemaError::Unknown(name.to_string()))?;
    serde_json::from_str(text).map_err(|e| SchemaError::BadSchema(name.to_string(), e.to_string()))
}

/// Checks `doc` against the named schema.
pub fn validate(name: &str, doc: &Value) -> Result<(), SchemaError> {
    let root = schema(name)?;
    let mut out = Vec::new();
    check(&root, &root, doc, "", &mut out)?;
    if out.is_empty() {
        Ok(())
    } else {
        Err(SchemaError::Invalid {
            schema: name.to_string(),
            violations: Violations(out),
        })
    }
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(n) if n.is_u64() || n.is_i64() => "integer",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn has_type(v: &Value, ty: &str) -> bool {
    let actual = type_name(v);
    actual == ty || (ty == "number" && actual == "integer")
}

fn resolve<'a>(root: &'a Value, reference: &str) -> Result<&'a Value, SchemaError> {
    reference
        .strip_prefix("#/")
        .and_then(|p| root.pointer(&format!("/{p}")))
        .ok_or_else(|| SchemaError::BadRef(reference.to_string()))
}

fn check(root: &Value, s: &Value, v: &Value, path: &str, out: &mut Vec<Violation>) -> Result<(), SchemaError> {
    let mut fail = |message: String| {
        out.push(Violation {
            path: path.to_string(),
            message,
        })
    };
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        return check(root, resolve(root, r)?, v, path, out);
    }
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::String(t) => has_type(v, t),
            Value::Array(ts) => ts.iter().filter_map(Value::as_str).any(|t| has_type(v, t)),
            _ => true,
        };
        if !ok {
            fail(format!("expected {t}, found {}", type_name(v)));
            return Ok(());
        }
    }
    if let Some(Value::Array(options)) = s.get("enum") {
        if !options.contains(v) {
            fail(format!("{v} is not one of {}", Value::Array(options.clone())));
        }
    }
    if let Some(c) = s.get("const") {
        if c != v {
            fail(format!("expected {c}"));
        }
    }
    if let (Some(min), Some(x)) = (s.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            fail(format!("{x} is below the minimum {min}"));
        }
    }
    if let Some(Value::Array(options)) = s.get("anyOf") {
        let mut matched = false;
        for o in options {
            let mut scratch = Vec::new();
            check(root, o, v, path, &mut scratch)?;
            if scratch.is_empty() {
                matched = true;
                break;
            }
        }
        if !matched {
            out.push(Violation {
                path: path.to_string(),
                message: "matches none of the alternatives".into(),
            });
        }
    }
    match v {
        Value::Array(items) => {
            if let Some(min) = s.get("minItems").and_then(Value::as_u64) {
                if (items.len() as u64) < min {
                    out.push(Violation {
                        path: path.to_string(),
                        message: format!("needs at least {min} items"),
                    });
                }
            }
            if let Some(max) = s.get("maxItems").and_then(Value::as_u64) {
                if items.len() as u64 > max {
                    out.push(Violation {
                        path: path.to_string(),
                        message: format!("allows at most {max} items"),
                    });
                }
            }
            if let Some(item) = s.get("items") {
                for (i, x) in items.iter().enumerate() {
                    check(root, item, x, &format!("{path}/{i}"), out)?;
                }
            }
        }
        Value::Object(map) => {
            if let Some(Value::Array(req)) = s.get("required") {
                for key in req.iter().filter_map(Value::as_str) {
                    if !map.contains_key(key) {
                        out.push(Violation {
                            path: path.to_string(),
                            message: format!("missing required property `{key}`"),
                        });
                    }
                }
            }
            let props = s.get("properties").and_then(Value::as_object);
            for (key, x) in map {
                let sub = format!("{path}/{key}");
                match (props.and_then(|p| p.get(key)), s.get("additionalProperties")) {
                    (Some(ps), _) => check(root, ps, x, &sub, out)?,
                    (None, Some(Value::Bool(false))) => out.push(Violation {
                        path: sub,
                        message: "unexpected property".into(),
                    }),
                    (None, Some(extra @ Value::Object(_))) => check(root, extra, x, &sub, out)?,
                    _ => {}
                }
            }
        }
        _ => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn every_shipped_schema_parses_and_is_versioned() {
        for (name, _) in SCHEMAS {
            let s = schema(name).unwrap();
            let id = s["$id"].as_str().unwrap();
            assert!(id.ends_with(":v1"), "{id}");
        }
    }

    #[test]
    fn env_documents() {
        assert!(validate("env", &json!({"domain": 4, "preds": {"P": [[0], [2]]}})).is_ok());
        let err = validate("env", &json!({"domain": 0, "extra": 1})).unwrap_err();
        let SchemaError::Invalid { violations, .. } = err else {
            panic!()
        };
        assert_eq!(violations.0.len(), 2, "{violations}");
    }

    #[test]
    fn nested_refs_and_alternatives() {
        let good = json!({"rounds": [{"eloise": 0, "abelard": 1, "value": false}], "winner": "abelard"});
        assert!(validate("transcript", &good).is_ok());
        let bad = json!({"rounds": [{"eloise": -1, "abelard": 1}], "winner": "nobody"});
        let msg = validate("transcript", &bad).unwrap_err().to_string();
        assert!(msg.contains("/rounds/0/eloise"), "{msg}");
        assert!(msg.contains("`value`"), "{msg}");
        assert!(msg.contains("nobody"), "{msg}");
        let r = json!({"passed": true, "domain": 2, "envs": 4, "checked": 16, "mode": "exhaustive", "seed": null, "counterexample": 3});
        assert!(validate("report", &r).is_err());
    }

    #[test]
    fn empty_trace_is_valid() {
        assert!(validate("trace", &json!({"steps": []})).is_ok());
        assert!(validate("trace", &json!({"steps": [{"kind": "jump"}]})).is_err());
    }

    #[test]
    fn unknown_schema() {
        assert_eq!(validate("nope", &json!(null)), Err(SchemaError::Unknown("nope".into())));
    }
}
