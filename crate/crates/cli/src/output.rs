//! Output records and their json / csv / text renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    ParseError,
    InvalidInput,
    Uncertifiable,
    BudgetExhausted,
    ToleranceFailed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::ParseError => "parse_error",
            Status::InvalidInput => "invalid_input",
            Status::Uncertifiable => "uncertifiable",
            Status::BudgetExhausted => "budget_exhausted",
            Status::ToleranceFailed => "tolerance_failed",
        }
    }

    /// 0 success, 1 usage or parse problem, 2 certification / budget /
    /// tolerance failure.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ParseError | Status::InvalidInput => 1,
            Status::Uncertifiable | Status::BudgetExhausted | Status::ToleranceFailed => 2,
        }
    }
}

/// A real number printed with 17 significant digits, or `null` if not finite.
pub fn real(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    match text.parse::<Number>() {
        Ok(n) => Value::Number(n),
        // unreachable for finite input; fall back to the shortest form
        Err(_) => Number::from_f64(x).map_or(Value::Null, Value::Number),
    }
}

#[derive(Debug, Clone)]
pub struct Record {
    pub command: &'static str,
    pub status: Status,
    pub inputs: Map<String, Value>,
    pub results: Value,
    pub message: Option<String>,
    pub timing_ms: f64,
}

impl Record {
    pub fn new(command: &'static str, inputs: Map<String, Value>) -> Record {
        Record {
            command,
            status: Status::Ok,
            inputs,
            results: Value::Null,
            message: None,
            timing_ms: 0.0,
        }
    }

    pub fn fail(mut self, status: Status, message: impl Into<String>) -> Record {
        self.status = status;
        self.message = Some(message.into());
        self
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema_version".into(), SCHEMA_VERSION.into());
        m.insert("command".into(), self.command.into());
        m.insert("status".into(), self.status.as_str().into());
        m.insert("inputs".into(), Value::Object(self.inputs.clone()));
        m.insert("results".into(), self.results.clone());
        m.insert("message".into(), self.message.clone().map_or(Value::Null, Value::String));
        m.insert("timing_ms".into(), real(self.timing_ms));
        Value::Object(m)
    }

    pub fn render(&self, format: Format) -> String {
        let v = self.to_value();
        match format {
            // serializing a Value cannot fail
            Format::Json => serde_json::to_string_pretty(&v).unwrap_or_default() + "\n",
            Format::Csv => render_csv(&v),
            Format::Text => render_text(&v),
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, child) in m {
                flatten(&key(k), child, out);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), child, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut out = String::from("key,value\n");
    for (k, val) in rows {
        let _ = writeln!(out, "{},{}", csv_field(&k), csv_field(&val));
    }
    out
}

fn render_text(v: &Value) -> String {
    fn walk(v: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match v {
            Value::Object(m) => {
                for (k, child) in m {
                    match child {
                        Value::Object(_) | Value::Array(_) => {
                            let _ = writeln!(out, "{pad}{k}:");
                            walk(child, indent + 1, out);
                        }
                        _ => {
                            let _ = writeln!(out, "{pad}{k}: {}", scalar(child));
                        }
                    }
                }
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    match child {
                        Value::Object(_) | Value::Array(_) => {
                            let _ = writeln!(out, "{pad}[{i}]");
                            walk(child, indent + 1, out);
                        }
                        _ => {
                            let _ = writeln!(out, "{pad}[{i}] {}", scalar(child));
                        }
                    }
                }
            }
            other => {
                let _ = writeln!(out, "{pad}{}", scalar(other));
            }
        }
    }
    fn scalar(v: &Value) -> String {
        match v {
            Value::Null => "-".into(),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }

    let Value::Object(m) = v else {
        return scalar(v) + "\n";
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {}",
        m.get("command").map(scalar).unwrap_or_default(),
        m.get("status").map(scalar).unwrap_or_default()
    );
    if let Some(Value::String(msg)) = m.get("message") {
        let _ = writeln!(out, "message: {msg}");
    }
    for key in ["inputs", "results"] {
        if let Some(child) = m.get(key).filter(|c| !c.is_null()) {
            let _ = writeln!(out, "{key}:");
            walk(child, 1, &mut out);
        }
    }
    out
}
