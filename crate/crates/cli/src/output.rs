//! Tables, CSV/JSON rendering and the run manifest.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Shortest representation that parses back to the same `f64`.
///
/// Plain notation for moderate magnitudes, exponent notation otherwise.
pub fn format_float(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let a = v.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format_float(*f),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Float(f) => serde_json::Number::from_f64(*f).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    fn json_records(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Everything needed to reproduce an output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    /// Canonical argument vector; replaying it regenerates the output.
    pub argv: Vec<String>,
    pub parameters: Map<String, Value>,
    pub format: Format,
    /// SHA-256 of the CSV rendering, independent of `format`.
    pub csv_sha256: String,
}

/// Result of a command before rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub parameters: Map<String, Value>,
    pub tables: Vec<Table>,
}

pub fn render_csv(tables: &[Table]) -> Result<String, CliError> {
    let mut out = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.push(b'\n');
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&t.columns)?;
        for row in &t.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        out.extend(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?);
    }
    String::from_utf8(out).map_err(|e| CliError::Io(e.to_string()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn manifest(&self, argv: &[String], format: Format) -> Result<RunManifest, CliError> {
        Ok(RunManifest {
            command: self.command.to_string(),
            version: landau_rel::VERSION.to_string(),
            argv: argv.to_vec(),
            parameters: self.parameters.clone(),
            format,
            csv_sha256: sha256_hex(render_csv(&self.tables)?.as_bytes()),
        })
    }

    /// Output body in the requested format.
    pub fn render(&self, manifest: &RunManifest) -> Result<String, CliError> {
        match manifest.format {
            Format::Csv => render_csv(&self.tables),
            Format::Json => {
                let mut top = Map::new();
                top.insert("manifest".into(), serde_json::to_value(manifest)?);
                for (i, t) in self.tables.iter().enumerate() {
                    let key = if i == 0 { "records" } else { t.name };
                    top.insert(key.into(), t.json_records());
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(top))?;
                s.push('\n');
                Ok(s)
            }
        }
    }
}
