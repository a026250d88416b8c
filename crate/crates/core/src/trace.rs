//! Step-list traces shared by the solvers, with JSON and DOT renderings.

use std::fmt::Write as _;

use serde_json::{Map, Value};
use thiserror::Error;

/// One step: a kind tag plus arbitrary JSON fields.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub kind: String,
    pub fields: Map<String, Value>,
}

impl Step {
    pub fn new(kind: impl Into<String>) -> Self {
        Step {
            kind: kind.into(),
            fields: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    /// Short label used for DOT nodes and terse listings.
    pub fn label(&self) -> String {
        let mut parts = vec![self.kind.clone()];
        for key in [
            "axiom", "term", "target", "approx", "literal", "block", "value", "n", "m", "formula", "limit",
        ] {
            if let Some(v) = self.fields.get(key) {
                parts.push(match v {
                    Value::String(s) => s.clone(),
                    Value::Bool(true) => "YES".to_string(),
                    Value::Bool(false) => "NO".to_string(),
                    other => other.to_string(),
                });
            }
        }
        parts.join(" ")
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    pub steps: Vec<Step>,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace JSON is malformed: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Trace {
    pub fn new() -> Self {
        Trace::default()
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn kinds(&self) -> Vec<&str> {
        self.steps.iter().map(|s| s.kind.as_str()).collect()
    }

    pub fn to_json(&self) -> Value {
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let mut obj = s.fields.clone();
                obj.insert("kind".to_string(), Value::String(s.kind.clone()));
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("steps".to_string(), Value::Array(steps));
        Value::Object(doc)
    }

    pub fn from_json(v: &Value) -> Result<Self, TraceError> {
        let steps = v
            .get("steps")
            .and_then(Value::as_array)
            .ok_or_else(|| TraceError::Malformed("missing `steps` array".into()))?;
        let mut out = Trace::new();
        for (i, s) in steps.iter().enumerate() {
            let mut obj = s
                .as_object()
                .cloned()
                .ok_or_else(|| TraceError::Malformed(format!("step {i} is not an object")))?;
            let kind = match obj.remove("kind") {
                Some(Value::String(k)) => k,
                _ => return Err(TraceError::Malformed(format!("step {i} has no string `kind`"))),
            };
            out.push(Step { kind, fields: obj });
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self, TraceError> {
        Trace::from_json(&serde_json::from_str(text)?)
    }

    /// A left-to-right chain of boxes, one per step. Query steps get
    /// diamond nodes with the answer on the outgoing edge.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", dot_id(name));
        let _ = writeln!(out, "  rankdir=TB;");
        for (i, s) in self.steps.iter().enumerate() {
            let shape = match s.kind.as_str() {
                "query" => "diamond",
                "init" | "end" => "ellipse",
                _ => "box",
            };
            let _ = writeln!(out, "  s{i} [shape={shape}, label=\"{}\"];", escape(&s.label()));
        }
        for i in 1..self.steps.len() {
            let prev = &self.steps[i - 1];
            let edge = match (prev.kind.as_str(), prev.get("value")) {
                ("query", Some(Value::Bool(b))) => format!(" [label=\"{}\"]", if *b { "YES" } else { "NO" }),
                _ => String::new(),
            };
            let _ = writeln!(out, "  s{} -> s{i}{edge};", i - 1);
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(name: &str) -> String {
    let clean: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if clean.is_empty() {
        "trace".to_string()
    } else {
        clean
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_trace_is_an_empty_step_list() {
        assert_eq!(Trace::new().to_json().to_string(), r#"{"steps":[]}"#);
    }

    #[test]
    fn json_round_trip() {
        let mut t = Trace::new();
        t.push(Step::new("init").with("assignment", serde_json::json!({"x": 0})));
        t.push(Step::new("query").with("value", false));
        let back = Trace::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn dot_labels_query_edges() {
        let mut t = Trace::new();
        t.push(Step::new("query").with("value", true));
        t.push(Step::new("end"));
        let dot = t.to_dot("fig");
        assert!(dot.contains("s0 -> s1 [label=\"YES\"]"));
        assert!(dot.starts_with("digraph fig {"));
    }

    #[test]
    fn malformed_step_is_rejected() {
        assert!(Trace::parse(r#"{"steps":[{"value":1}]}"#).is_err());
        assert!(Trace::parse(r#"{"nope":[]}"#).is_err());
    }
}
