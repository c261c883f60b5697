use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::{Format, RunConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
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

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

/// Column-ordered rows produced by one command.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Set when any row carries a truncated or unconverged value.
    pub nonconverged: bool,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Report {
            columns,
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn csv_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn table_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e6).contains(&a) || !x.is_finite() {
        format!("{x:.10}")
    } else {
        format!("{x:.9e}")
    }
}

fn cell_text(c: &Cell, num: fn(f64) -> String) -> String {
    match c {
        Cell::Num(x) => num(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Missing => String::new(),
    }
}

fn cell_json(c: &Cell) -> Value {
    match c {
        // NaN and infinities become null, as JSON has no spelling for them.
        Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
        Cell::Int(i) => Value::from(*i),
        Cell::Text(s) => Value::from(s.as_str()),
        Cell::Bool(b) => Value::from(*b),
        Cell::Missing => Value::Null,
    }
}

#[derive(Serialize)]
struct Document<'a> {
    config: &'a RunConfig,
    results: Vec<Map<String, Value>>,
}

pub fn render(report: &Report, config: &RunConfig) -> CliResult<Vec<u8>> {
    match config.format {
        Format::Table => Ok(render_table(report).into_bytes()),
        Format::Csv => render_csv(report),
        Format::Json => render_json(report, config),
    }
}

fn render_table(report: &Report) -> String {
    let cells: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| r.iter().map(|c| cell_text(c, table_number)).collect())
        .collect();
    let widths: Vec<usize> = report
        .columns
        .iter()
        .enumerate()
        .map(|(j, h)| cells.iter().map(|r| r[j].len()).fold(h.len(), usize::max))
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, items: &mut dyn Iterator<Item = (usize, &str)>| {
        let parts: Vec<String> = items.map(|(j, s)| format!("{s:>w$}", w = widths[j])).collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut out, &mut report.columns.iter().copied().enumerate());
    for r in &cells {
        line(&mut out, &mut r.iter().map(String::as_str).enumerate());
    }
    out
}

fn render_csv(report: &Report) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let emit = |e: csv::Error| CliError::Emit(e.to_string());
    w.write_record(&report.columns).map_err(emit)?;
    for r in &report.rows {
        w.write_record(r.iter().map(|c| cell_text(c, csv_number)))
            .map_err(emit)?;
    }
    w.into_inner().map_err(|e| CliError::Emit(e.to_string()))
}

fn render_json(report: &Report, config: &RunConfig) -> CliResult<Vec<u8>> {
    let results = report
        .rows
        .iter()
        .map(|r| {
            report
                .columns
                .iter()
                .zip(r)
                .map(|(k, c)| (k.to_string(), cell_json(c)))
                .collect()
        })
        .collect();
    let doc = Document { config, results };
    let mut bytes = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Emit(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_to(sink: &mut dyn Write, bytes: &[u8]) -> std::io::Result<()> {
    sink.write_all(bytes)?;
    sink.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formats() {
        assert_eq!(csv_number(0.5), "0.5");
        assert_eq!(csv_number(1e-5), "1e-5");
        assert_eq!(table_number(-0.5772156649015329), "-0.5772156649");
        assert_eq!(table_number(2.5e-7), "2.500000000e-7");
    }

    #[test]
    fn table_aligns_columns() {
        let mut r = Report::new(vec!["x", "name"]);
        r.push(vec![Cell::Num(1.0), Cell::from("abc")]);
        let t = render_table(&r);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].ends_with("abc"));
    }
}
