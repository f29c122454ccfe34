//! CSV and JSON writers.
//!
//! Every CSV starts with a `# schema: <name>/<version>` line followed by the
//! column header. Cells use the shortest round-trip decimal form of each
//! `f64`; missing values are empty cells.

use std::path::Path;

use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:?}")
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

impl CsvTable {
    pub fn new(schema: &str, columns: Vec<String>) -> Self {
        Self { schema: schema.to_string(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::InvalidArgument(format!("row has {} cells for {} columns", row.len(), self.columns.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        for r in std::iter::once(&self.columns).chain(&self.rows) {
            w.write_record(r).expect("writing to memory");
        }
        let body = String::from_utf8(w.into_inner().expect("writing to memory")).expect("cells are UTF-8");
        format!("# schema: {}\n{body}", self.schema)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, self.render())
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::InvalidArgument(format!("JSON encoding: {e}")))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, to_json(value)? + "\n")
}

fn write_file(path: &Path, text: String) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_round_trips_numbers() {
        let mut t = CsvTable::new("test/1", vec!["a".into(), "b".into()]);
        t.push(vec![num(0.1 + 0.2), opt(None)]).unwrap();
        t.push(vec![num(1e-300), "x, \"y\"".into()]).unwrap();
        assert!(t.push(vec![]).is_err());
        let s = t.render();
        assert_eq!(s.lines().next(), Some("# schema: test/1"));
        let cell: f64 = s.lines().nth(2).unwrap().split(',').next().unwrap().parse().unwrap();
        assert_eq!(cell, 0.1 + 0.2);
        assert!(s.ends_with("1e-300,\"x, \"\"y\"\"\"\n"));
    }
}
