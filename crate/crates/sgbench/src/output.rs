use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;
use crate::CliError;

pub const SCHEMA_VERSION: &str = "sgbench/1";

/// Plot-ready table of `(scale, estimate, stderr)` style rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Everything a command produces; rendering is separate so that the same
/// artifact can be checked in tests without touching the filesystem.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub command: String,
    pub config: Value,
    pub result: Value,
    /// `None` for commands that do not audit anything.
    pub passed: Option<bool>,
    pub table: Option<Table>,
    /// Short summary printed next to a CSV file.
    pub summary: Option<Value>,
}

impl Artifact {
    pub fn new(command: &str, config: impl Serialize, result: impl Serialize) -> Result<Self, CliError> {
        Ok(Artifact {
            command: command.into(),
            config: to_value(config)?,
            result: to_value(result)?,
            passed: None,
            table: None,
            summary: None,
        })
    }

    pub fn json(&self) -> String {
        let mut doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
        });
        if let Some(p) = self.passed {
            doc["passed"] = Value::Bool(p);
        }
        doc["result"] = self.result.clone();
        let mut s = serde_json::to_string_pretty(&doc).expect("json values always serialize");
        s.push('\n');
        s
    }

    pub fn csv(&self) -> Result<String, CliError> {
        let table =
            self.table.as_ref().ok_or_else(|| CliError::Usage(format!("`{}` has no CSV output", self.command)))?;
        let mut s = String::new();
        let config = serde_json::to_string(&self.config).expect("json values always serialize");
        let _ = writeln!(s, "# schema_version: {SCHEMA_VERSION}");
        let _ = writeln!(s, "# command: {}", self.command);
        let _ = writeln!(s, "# config: {config}");
        s.push_str(&table.header.join(","));
        s.push('\n');
        for row in &table.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        Ok(s)
    }

    pub fn summary_json(&self) -> Option<String> {
        let summary = self.summary.as_ref()?;
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "summary": summary,
        });
        Some(serde_json::to_string_pretty(&doc).expect("json values always serialize") + "\n")
    }

    /// Write to `out` or stdout. With CSV to a file, the JSON summary goes to
    /// stdout.
    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<(), CliError> {
        let body = match format {
            Format::Json => self.json(),
            Format::Csv => self.csv()?,
        };
        match out {
            Some(path) => {
                std::fs::write(path, body)
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                if format == Format::Csv {
                    if let Some(s) = self.summary_json() {
                        print!("{s}");
                    }
                }
            }
            None => print!("{body}"),
        }
        Ok(())
    }
}

pub fn to_value(v: impl Serialize) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Failed(format!("serialization failed: {e}")))
}

/// Floats print as shortest round-trip decimals; non-finite values as `nan`/`inf`.
pub fn num(x: f64) -> String {
    format!("{x}")
}
