//! Structured command results with deterministic text and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::Rational64;
use serde_json::{json, Map, Value as Json};

use crate::polynomial::{Poly, Poly2};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Big(BigInt),
    /// Printed as `p/q`, or `p` when integral.
    Rational(Rational64),
    Bool(bool),
    Text(String),
    Poly(Poly),
    Poly2(Poly2),
    List(Vec<Value>),
    Record(BTreeMap<String, Value>),
}

impl Value {
    pub fn record<K: Into<String>, I: IntoIterator<Item = (K, Value)>>(items: I) -> Value {
        Value::Record(items.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    fn scalar_text(&self) -> Option<String> {
        Some(match self {
            Value::Int(i) => i.to_string(),
            Value::Big(b) => b.to_string(),
            Value::Rational(r) => r.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Poly(p) => p.to_string(),
            Value::Poly2(p) => p.to_string(),
            Value::List(_) | Value::Record(_) => return None,
        })
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Int(i) => json!(i),
            Value::Big(b) => match i64::try_from(b) {
                Ok(i) => json!(i),
                Err(_) => json!(b.to_string()),
            },
            Value::Bool(b) => json!(b),
            Value::Rational(_) | Value::Text(_) | Value::Poly(_) | Value::Poly2(_) => {
                json!(self.scalar_text())
            }
            Value::List(items) => Json::Array(items.iter().map(Value::to_json).collect()),
            Value::Record(map) => Json::Object(
                map.iter()
                    .map(|(k, v)| (k.clone(), v.to_json()))
                    .collect::<Map<_, _>>(),
            ),
        }
    }

    fn write_text(&self, out: &mut String, indent: usize) {
        if let Some(s) = self.scalar_text() {
            out.push_str(&s);
            return;
        }
        let pad = "  ".repeat(indent + 1);
        match self {
            Value::List(items) if items.iter().all(|v| v.scalar_text().is_some()) => {
                let parts: Vec<String> = items.iter().filter_map(Value::scalar_text).collect();
                write!(out, "[{}]", parts.join(", ")).unwrap();
            }
            Value::List(items) => {
                for item in items {
                    write!(out, "\n{pad}-").unwrap();
                    match item {
                        Value::Record(map) if map.values().all(|v| v.scalar_text().is_some()) => {
                            let parts: Vec<String> = map
                                .iter()
                                .map(|(k, v)| {
                                    format!("{k}: {}", v.scalar_text().unwrap_or_default())
                                })
                                .collect();
                            write!(out, " {}", parts.join(", ")).unwrap();
                        }
                        _ => {
                            if item.scalar_text().is_some() {
                                out.push(' ');
                            }
                            item.write_text(out, indent + 1);
                        }
                    }
                }
            }
            Value::Record(map) => {
                for (k, v) in map {
                    write!(out, "\n{pad}{k}:").unwrap();
                    if v.scalar_text().is_some()
                        || matches!(v, Value::List(l) if l.iter().all(|x| x.scalar_text().is_some()))
                    {
                        out.push(' ');
                    }
                    v.write_text(out, indent + 1);
                }
            }
            _ => unreachable!("scalars handled above"),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<Rational64> for Value {
    fn from(v: Rational64) -> Self {
        Value::Rational(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<Poly> for Value {
    fn from(v: Poly) -> Self {
        Value::Poly(v)
    }
}

impl From<Poly2> for Value {
    fn from(v: Poly2) -> Self {
        Value::Poly2(v)
    }
}

impl From<BigInt> for Value {
    fn from(v: BigInt) -> Self {
        Value::Big(v)
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(v: Vec<T>) -> Self {
        Value::List(v.into_iter().map(Into::into).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub results: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rendering {
    Text,
    Json,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_owned(),
            inputs: Vec::new(),
            results: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &str, sha256: String) {
        self.inputs.push(InputDigest {
            path: path.to_owned(),
            sha256,
        });
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_owned(), value.into());
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn to_json(&self) -> Json {
        let results: Map<String, Json> = self
            .results
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        let inputs: Vec<Json> = self
            .inputs
            .iter()
            .map(|i| json!({"path": i.path, "sha256": i.sha256}))
            .collect();
        json!({
            "command": self.command,
            "inputs": inputs,
            "results": results,
            "warnings": self.warnings,
        })
    }

    pub fn render(&self, how: Rendering) -> String {
        match how {
            Rendering::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json");
                s.push('\n');
                s
            }
            Rendering::Text => self.to_text(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for i in &self.inputs {
            writeln!(out, "input: {} sha256={}", i.path, i.sha256).unwrap();
        }
        let body = Value::Record(self.results.clone());
        let mut rendered = String::new();
        body.write_text(&mut rendered, 0);
        for line in rendered.lines().filter(|l| !l.is_empty()) {
            // drop the record's own indentation at the top level
            out.push_str(line.strip_prefix("  ").unwrap_or(line));
            out.push('\n');
        }
        for w in &self.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        out
    }
}
