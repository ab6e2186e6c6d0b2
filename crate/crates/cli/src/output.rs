use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{usage, CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rows for the CSV form of an artifact.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Everything a command produces. Payloads carry no timestamps, so equal
/// configs give byte-identical files.
#[derive(Debug)]
pub struct Artifact {
    pub command: &'static str,
    pub config: Value,
    pub result: Value,
    pub table: Option<Table>,
    pub svg: Option<String>,
    pub summary: Vec<String>,
    /// The command ran but its check failed.
    pub failed: bool,
}

impl Artifact {
    pub fn new(command: &'static str, config: Value, result: &impl Serialize) -> CliResult<Self> {
        let result = serde_json::to_value(result).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Artifact { command, config, result, table: None, svg: None, summary: Vec::new(), failed: false })
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.summary.push(text.into());
    }

    pub fn json(&self) -> String {
        let envelope = json!({
            "tool": "carpet",
            "version": VERSION,
            "command": self.command,
            "config": self.config,
            "result": self.result,
        });
        let mut s = serde_json::to_string_pretty(&envelope).expect("JSON values serialize");
        s.push('\n');
        s
    }

    pub fn csv(&self) -> CliResult<String> {
        let table = self.table.as_ref().ok_or_else(|| usage(format!("`{}` has no CSV form; use .json", self.command)))?;
        let mut s = String::new();
        let _ = writeln!(s, "# carpet {VERSION} {}", self.command);
        let _ = writeln!(s, "# config {}", self.config);
        let _ = writeln!(s, "{}", table.header.join(","));
        for row in &table.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("json");
        let body = match ext {
            "csv" => self.csv()?,
            "svg" => self.svg.clone().ok_or_else(|| usage(format!("`{}` has no SVG form", self.command)))?,
            "json" => self.json(),
            other => return Err(usage(format!("unknown output extension `.{other}`"))),
        };
        std::fs::write(path, body).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
    }
}

/// Shortest round-trip decimal form, used for every float in CSV output.
pub fn num(v: f64) -> String {
    format!("{v}")
}
