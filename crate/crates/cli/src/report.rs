use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A command's output: a table for CSV and a structured value for JSON.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub field: String,
    pub params: Vec<(&'static str, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub summary: Value,
}

impl Report {
    pub fn new(command: &'static str, field: String) -> Self {
        Report {
            command,
            field,
            params: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            summary: Value::Null,
        }
    }

    pub fn param(mut self, key: &'static str, value: impl ToString) -> Self {
        self.params.push((key, value.to_string()));
        self
    }

    pub fn columns(mut self, cols: &[&'static str]) -> Self {
        self.columns = cols.to_vec();
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn summary(mut self, value: impl Serialize) -> Self {
        self.summary = serde_json::to_value(value).unwrap_or(Value::Null);
        self
    }

    fn params_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# field={} command={} params={}",
            self.field,
            self.command,
            self.params_string()
        );
        let _ = writeln!(out, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let params: serde_json::Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| (c.to_string(), cell(v)))
                        .collect(),
                )
            })
            .collect();
        let mut doc = json!({
            "field": self.field,
            "command": self.command,
            "params": params,
            "rows": rows,
        });
        if !self.summary.is_null() {
            doc["summary"] = self.summary.clone();
        }
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Numbers and booleans stay typed in JSON rows.
fn cell(v: &str) -> Value {
    if let Ok(i) = v.parse::<i64>() {
        return Value::from(i);
    }
    if let Ok(b) = v.parse::<bool>() {
        return Value::Bool(b);
    }
    match v.parse::<f64>() {
        Ok(f) if f.is_finite() => Value::from(f),
        _ => Value::String(v.to_string()),
    }
}
