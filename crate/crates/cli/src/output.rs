use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::commands::CliError;
use crate::Format;

#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Int(u64),
    Real(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            // Debug formatting is the shortest string that round-trips.
            Cell::Real(x) => format!("{x:?}"),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(i) => Value::from(i),
            Cell::Real(x) => serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number),
        }
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn series(rows: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut t = Self::new(&["t", "value"]);
        t.rows = rows.into_iter().map(|(a, b)| vec![Cell::Real(a), Cell::Real(b)]).collect();
        t
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let mut w = create(&path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Io(path.clone(), e.into()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| CliError::Io(path.clone(), e))?;
    Ok(path)
}

/// Writes `stem.csv` or `stem.json` depending on `format`.
pub fn write_table(dir: &Path, stem: &str, format: Format, table: &Table) -> Result<PathBuf, CliError> {
    match format {
        Format::Csv => {
            let path = dir.join(format!("{stem}.csv"));
            let mut w = create(&path)?;
            let io = |e| CliError::Io(path.clone(), e);
            writeln!(w, "{}", table.columns.join(",")).map_err(io)?;
            for row in &table.rows {
                let line: Vec<String> = row.iter().map(Cell::csv).collect();
                writeln!(w, "{}", line.join(",")).map_err(io)?;
            }
            w.flush().map_err(io)?;
            Ok(path)
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = table
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            write_json(dir, &format!("{stem}.json"), &rows)
        }
    }
}
