//! One report per invocation, rendered as a JSON document or as CSV rows.
//!
//! JSON object keys come out sorted (serde_json's default map), rows keep
//! column order, and floats use the shortest round-trip form, so equal
//! inputs give byte-identical output.

use std::io::Write;

use num_bigint::BigInt;
use racah_dist::Rational;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) | Cell::Empty => Value::Null,
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => v.to_string(),
            Cell::Float(_) | Cell::Empty => String::new(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// `num`, `den`, `float` cells of an exact value.
pub fn exact_cells(v: &Rational) -> [Cell; 3] {
    [
        Cell::Text(v.numer().to_string()),
        Cell::Text(v.denom().to_string()),
        Cell::Float(racah_dist::exact::to_f64(v)),
    ]
}

pub fn fraction(v: &Rational) -> String {
    if v.denom() == &BigInt::from(1) {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, Cell)>,
    pub meta: Vec<(&'static str, Value)>,
}

impl Report {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Report { command, columns: columns.to_vec(), rows: Vec::new(), summary: Vec::new(), meta: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn put(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.summary.push((key, value.into()));
    }

    pub fn meta(&mut self, key: &'static str, value: Value) {
        self.meta.push((key, value));
    }

    pub fn to_json(&self) -> Value {
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.to_string(), v.to_json())).collect();
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        json!({
            "command": self.command,
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "summary": summary,
            "meta": meta,
        })
    }

    pub fn write_json(&self, out: &mut impl Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
        writeln!(out)
    }

    /// Rows only; the summary and metadata go to `side` as `key=value` lines.
    pub fn write_csv(&self, out: &mut impl Write, side: &mut impl Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv))?;
        }
        w.flush()?;
        for (k, v) in &self.summary {
            writeln!(side, "{k}={}", v.to_csv())?;
        }
        for (k, v) in &self.meta {
            writeln!(side, "{k}={v}")?;
        }
        Ok(())
    }
}
