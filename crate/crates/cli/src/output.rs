//! Tables and their CSV/JSON serialisation.

use crate::config::ExperimentConfig;
use crate::CliError;
use serde_json::{json, Map, Value};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // Shortest round-trip form, e.g. `0.5`, `1e-20`.
            Cell::Num(x) => match serde_json::Number::from_f64(*x) {
                Some(n) => n.to_string(),
                None => x.to_string(),
            },
            Cell::Int(k) => k.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // Non-finite numbers have no JSON encoding.
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(k) => json!(k),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}
impl From<usize> for Cell {
    fn from(k: usize) -> Self {
        Cell::Int(k as i64)
    }
}
impl From<i64> for Cell {
    fn from(k: i64) -> Self {
        Cell::Int(k)
    }
}
impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}
impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}
impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Empty for the primary table of a command.
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&'static str]) -> Self {
        Self { name: name.to_string(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn records(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let m: Map<String, Value> =
                        self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                    Value::Object(m)
                })
                .collect(),
        )
    }
}

/// Result of one command: the primary table first, then auxiliary tables.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub tables: Vec<Table>,
    pub summary: Value,
    /// False when a statistical check failed (only affects the exit code under `--strict`).
    pub statistical_pass: bool,
}

#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($crate::output::Cell::from($x)),*] };
}

fn file_stem(command: &str, table: &str) -> String {
    if table.is_empty() {
        command.to_string()
    } else {
        format!("{command}_{table}")
    }
}

/// Writes one CSV per table, each starting with `#` lines carrying the
/// config, version and summary, then the header row.
pub fn write_csv(dir: &Path, cfg: &ExperimentConfig, report: &Report) -> Result<Vec<PathBuf>, CliError> {
    let mut paths = Vec::new();
    let config_line = serde_json::to_string(cfg)?;
    let summary_line = serde_json::to_string(&report.summary)?;
    for t in &report.tables {
        let path = dir.join(format!("{}.csv", file_stem(&cfg.command, &t.name)));
        let mut buf = Vec::new();
        {
            use std::io::Write;
            writeln!(buf, "# config: {config_line}")?;
            writeln!(buf, "# version: {}", cfg.version)?;
            writeln!(buf, "# summary: {summary_line}")?;
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&t.columns)?;
            for r in &t.rows {
                w.write_record(r.iter().map(Cell::csv))?;
            }
            w.flush()?;
        }
        std::fs::write(&path, buf)?;
        paths.push(path);
    }
    Ok(paths)
}

/// `{"config", "version", "results", "tables", "summary"}`; `results` holds
/// the primary table as records, `tables` the auxiliary ones by name.
pub fn to_json(cfg: &ExperimentConfig, report: &Report) -> Result<Value, CliError> {
    let mut tables = Map::new();
    for t in report.tables.iter().skip(1) {
        tables.insert(t.name.clone(), t.records());
    }
    Ok(json!({
        "config": serde_json::to_value(cfg)?,
        "version": cfg.version,
        "results": report.tables.first().map_or(Value::Array(vec![]), Table::records),
        "tables": Value::Object(tables),
        "summary": report.summary,
    }))
}

pub fn write_json(dir: &Path, cfg: &ExperimentConfig, report: &Report) -> Result<PathBuf, CliError> {
    let path = dir.join(format!("{}.json", cfg.command));
    let mut text = serde_json::to_string_pretty(&to_json(cfg, report)?)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}
