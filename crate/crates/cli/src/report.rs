//! Analysis reports: one JSON value, rendered either as JSON or as an
//! indented plain-text outline of the same value.

use std::fmt::Write as _;
use std::time::Instant;

use serde_json::{json, Map, Value};

pub struct Report {
    pub command: &'static str,
    pub input: Value,
    pub parameters: Value,
    pub results: Map<String, Value>,
    pub certificates: Map<String, Value>,
    pub timings: Vec<(String, f64)>,
    /// Human-oriented block printed ahead of the outline (matrices etc.).
    pub display: Option<String>,
    /// Every certificate held; drives exit code 1.
    pub passed: bool,
}

impl Report {
    pub fn new(command: &'static str, input: Value, parameters: Value) -> Self {
        Report {
            command,
            input,
            parameters,
            results: Map::new(),
            certificates: Map::new(),
            timings: Vec::new(),
            display: None,
            passed: true,
        }
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.into(), value);
    }

    /// Records a boolean certificate; a false one marks the report failed.
    pub fn certify(&mut self, key: &str, holds: bool) {
        self.passed &= holds;
        self.certificates.insert(key.into(), Value::Bool(holds));
    }

    pub fn certificate(&mut self, key: &str, value: Value) {
        self.certificates.insert(key.into(), value);
    }

    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push((stage.into(), start.elapsed().as_secs_f64() * 1e3));
        out
    }

    pub fn to_data(&self, with_timings: bool) -> Value {
        let mut out = json!({
            "command": self.command,
            "input": self.input,
            "parameters": self.parameters,
            "results": self.results,
            "certificates": self.certificates,
            "passed": self.passed,
        });
        if with_timings {
            let t: Map<String, Value> = self.timings.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            out["timings_ms"] = Value::Object(t);
        }
        out
    }

    pub fn render_text(&self, with_timings: bool) -> String {
        let mut out = String::new();
        if let Some(d) = &self.display {
            out.push_str(d.trim_end());
            out.push_str("\n\n");
        }
        outline(&mut out, &self.to_data(with_timings), 0);
        out
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => Some(format!(
            "[{}]",
            items.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn outline(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar_text(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        outline(out, item, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar_text(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        outline(out, item, depth + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other).unwrap_or_default());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outline_nests_objects_and_lists() {
        let mut out = String::new();
        outline(&mut out, &json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": true}]}), 0);
        assert_eq!(out, "a: 1\nb:\n  c: [1, 2]\nd:\n  -\n    e: true\n");
    }

    #[test]
    fn false_certificate_fails_report() {
        let mut r = Report::new("x", json!({}), json!({}));
        r.certify("ok", true);
        assert!(r.passed);
        r.certify("bad", false);
        assert!(!r.passed);
        assert_eq!(r.to_data(false)["certificates"]["bad"], json!(false));
        assert!(r.to_data(false).get("timings_ms").is_none());
    }
}
