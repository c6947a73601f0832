//! Tabular output records and their CSV / JSON encodings.
//!
//! Both encodings carry the same values: reals are written with 17
//! significant digits in CSV and as shortest round-trip literals in JSON, so
//! re-parsing either yields identical `f64` bits.

use std::collections::BTreeMap;
use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Real(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Missing => Value::Null,
        }
    }
}

/// One output record: a named table plus the parameters that produced it.
#[derive(Debug, Clone)]
pub struct Table {
    pub schema: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Parameter echo.
    pub metadata: BTreeMap<String, Value>,
    /// Verdicts derived from the whole table (e.g. monotonicity).
    pub summary: BTreeMap<String, Value>,
}

impl Table {
    pub fn new(schema: &'static str, columns: &[&'static str]) -> Self {
        Self {
            schema,
            columns: columns.to_vec(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
            summary: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.metadata.insert(key.to_owned(), value.into());
        self
    }

    pub fn verdict(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.to_owned(), value.into());
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    /// Metadata and summary go in leading `#` comment lines, then a header row.
    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "# schema: {}", self.schema)?;
        writeln!(out, "# schema_version: {SCHEMA_VERSION}")?;
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        for (k, v) in &self.summary {
            writeln!(out, "# summary.{k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        w.flush()
    }

    fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut root = Map::new();
        root.insert("schema".into(), json!(self.schema));
        root.insert("schema_version".into(), json!(SCHEMA_VERSION));
        root.insert("columns".into(), json!(self.columns));
        root.insert("metadata".into(), json!(self.metadata));
        root.insert("summary".into(), json!(self.summary));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        root.insert("rows".into(), Value::Array(rows));
        serde_json::to_writer_pretty(&mut *out, &Value::Object(root))?;
        writeln!(out)
    }
}
