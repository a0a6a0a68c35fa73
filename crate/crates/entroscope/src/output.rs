//! Single output sink: CSV with a `#` header block, or one JSON document.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::B(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Null, Cell::F)
    }
}

/// Debug formatting round-trips and switches to exponent form for tiny values.
fn float_text(x: f64) -> String {
    format!("{x:?}")
}

fn float_json(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(float_text(x))
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => float_text(*x),
            Cell::I(i) => i.to_string(),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn ty(&self) -> &'static str {
        match self {
            Cell::F(_) => "f64",
            Cell::I(_) => "int",
            Cell::S(_) | Cell::Null => "str",
            Cell::B(_) => "bool",
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => float_json(*x),
            Cell::I(i) => json!(i),
            Cell::S(s) => json!(s),
            Cell::B(b) => json!(b),
            Cell::Null => Value::Null,
        }
    }
}

/// Column types in the schema line: `f64`, `int`, `str`, `bool`.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<(String, &'static str)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[(&str, &'static str)]) -> Self {
        Self { columns: columns.iter().map(|(n, t)| (n.to_string(), *t)).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn schema(&self) -> String {
        self.columns.iter().map(|(n, t)| format!("{n}:{t}")).collect::<Vec<_>>().join(",")
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub table: Option<Table>,
    pub summary: Vec<(String, Cell)>,
    /// Always emitted as a JSON document.
    pub json_summary: bool,
}

impl Report {
    pub fn table(table: Table) -> Self {
        Self { table: Some(table), ..Self::default() }
    }

    pub fn with(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.summary.push((key.to_string(), value.into()));
        self
    }

    fn summary_json(&self) -> Value {
        Value::Object(self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect::<Map<_, _>>())
    }

    fn summary_schema(&self) -> String {
        self.summary.iter().map(|(k, v)| format!("{k}:{}", v.ty())).collect::<Vec<_>>().join(",")
    }

    fn summary_text(&self) -> String {
        self.summary.iter().map(|(k, v)| format!("{k}: {}\n", v.csv())).collect()
    }
}

/// What every output starts with.
#[derive(Clone, Debug)]
pub struct Header {
    pub version: &'static str,
    pub seed: u64,
    pub config: Value,
}

impl Header {
    fn block(&self, schema: &str) -> String {
        format!(
            "# entroscope {}\n# seed: {}\n# config: {}\n# schema: {schema}\n",
            self.version, self.seed, self.config
        )
    }
}

fn document(report: &Report, header: &Header) -> Value {
    let mut doc = json!({ "version": header.version, "seed": header.seed, "config": header.config });
    if let Some(t) = &report.table {
        doc["columns"] = t.columns.iter().map(|(n, ty)| json!({ "name": n, "type": ty })).collect();
        doc["rows"] = t
            .rows
            .iter()
            .map(|r| Value::Object(t.columns.iter().zip(r).map(|((n, _), c)| (n.clone(), c.json())).collect()))
            .collect();
    }
    if !report.summary.is_empty() {
        doc["summary"] = report.summary_json();
    }
    doc
}

pub fn csv_text(table: &Table, header: &Header) -> Result<String> {
    let mut w = csv::Writer::from_writer(header.block(&table.schema()).into_bytes());
    w.write_record(table.columns.iter().map(|(n, _)| n.as_str()))?;
    for r in &table.rows {
        w.write_record(r.iter().map(Cell::csv))?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn write_to(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Tables go to `out` (stdout by default). The summary follows on stdout
/// when the table went to a file, on stderr otherwise.
pub fn emit(report: &Report, header: &Header, json: bool, out: Option<&Path>) -> Result<()> {
    if json || report.json_summary {
        return write_to(out, &format!("{:#}\n", document(report, header)));
    }
    let summary = report.summary_text();
    match &report.table {
        None => write_to(out, &format!("{}{summary}", header.block(&report.summary_schema()))),
        Some(t) => {
            write_to(out, &csv_text(t, header)?)?;
            if summary.is_empty() {
                return Ok(());
            }
            if out.is_some() {
                std::io::stdout().lock().write_all(summary.as_bytes())?;
            } else {
                std::io::stderr().lock().write_all(summary.as_bytes())?;
            }
            Ok(())
        }
    }
}
