//! Tabular CSV/JSON writers. Every numeric cell must be finite; floats are
//! written with 17 significant digits in CSV.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{Map, Number, Value};

use super::config::OutputFormat;
use super::RunError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
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

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl Table {
    pub fn new(name: impl Into<String>, columns: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            name: name.into(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn check_finite(&self) -> Result<(), RunError> {
        for row in &self.rows {
            for (cell, col) in row.iter().zip(&self.columns) {
                if let Cell::Num(v) = cell {
                    if !v.is_finite() {
                        return Err(RunError::Compute(format!(
                            "non-finite value in column `{col}` of `{}`",
                            self.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String, RunError> {
        self.check_finite()?;
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Num(v) => format_float(*v),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        Ok(out)
    }

    /// Array of records keyed by the same names as the CSV header.
    pub fn to_json(&self) -> Result<String, RunError> {
        self.check_finite()?;
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Int(i) => Value::from(*i),
                        Cell::Num(x) => Value::Number(Number::from_f64(*x).expect("finite")),
                        Cell::Text(s) => Value::String(s.clone()),
                    };
                    obj.insert(col.clone(), v);
                }
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&records).expect("json serialization");
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, dir: &Path, format: OutputFormat) -> Result<PathBuf, RunError> {
        let (ext, body) = match format {
            OutputFormat::Csv => ("csv", self.to_csv()?),
            OutputFormat::Json => ("json", self.to_json()?),
        };
        let path = dir.join(format!("{}.{ext}", self.name));
        fs::write(&path, body).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_share_field_names() {
        let mut t = Table::new("x", ["k", "value", "kind"]);
        t.push(vec![1usize.into(), 0.1.into(), "bright".into()]);
        let csv = t.to_csv().unwrap();
        assert_eq!(csv, "k,value,kind\n1,1.0000000000000001e-1,bright\n");
        let json: Value = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(json[0]["k"], 1);
        assert_eq!(json[0]["value"], 0.1);
        assert_eq!(json[0]["kind"], "bright");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [std::f64::consts::PI, 1.602176634e-19, -3.0e300, 5e-324] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn non_finite_rejected() {
        let mut t = Table::new("x", ["a"]);
        t.push(vec![f64::NAN.into()]);
        assert!(matches!(t.to_csv(), Err(RunError::Compute(_))));
        assert!(t.to_json().is_err());
    }
}
