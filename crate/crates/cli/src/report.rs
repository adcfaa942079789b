use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Map, Value};
use xchannel::rational::{self, Rational, RationalJson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i128),
    Float(f64),
    Rat(Rational),
    Bool(bool),
    Null,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn int(v: impl Into<i128>) -> Self {
        Cell::Int(v.into())
    }

    pub fn opt_float(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Float)
    }

    fn table(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Rat(r) => rational::display(r),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => "-".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => json!(s),
            Cell::Int(v) => json!(*v as i64),
            Cell::Float(v) => json!(v),
            Cell::Rat(r) => json!(RationalJson::from(*r)),
            Cell::Bool(b) => json!(b),
            Cell::Null => Value::Null,
        }
    }
}

/// Tabular command output plus the resolved configuration that produced it.
///
/// CSV splits every rational column `x` into `x_num,x_den`; JSON emits
/// `{"config": ..., "result": ...}` where `result` defaults to one object per row.
#[derive(Debug, Clone)]
pub struct Report {
    pub config: Value,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub result: Option<Value>,
    pub footer: Vec<String>,
    pub ok: bool,
}

impl Report {
    pub fn new(config: Value, headers: Vec<&'static str>) -> Self {
        Report { config, headers, rows: Vec::new(), result: None, footer: Vec::new(), ok: true }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    fn rational_columns(&self) -> Vec<bool> {
        (0..self.headers.len()).map(|c| self.rows.iter().any(|r| matches!(r[c], Cell::Rat(_)))).collect()
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Table => Ok(self.table()),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn table(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::table).collect()).collect();
        let widths: Vec<usize> = self
            .headers
            .iter()
            .enumerate()
            .map(|(c, h)| cells.iter().map(|r| r[c].len()).chain([h.len()]).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        let line = |items: Vec<&str>| -> String {
            let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            padded.join("  ").trim_end().to_string()
        };
        if !self.headers.is_empty() {
            let _ = writeln!(out, "{}", line(self.headers.clone()));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
        for f in &self.footer {
            let _ = writeln!(out, "{f}");
        }
        out
    }

    fn csv(&self) -> Result<String, String> {
        let rat = self.rational_columns();
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<String> = self
            .headers
            .iter()
            .zip(&rat)
            .flat_map(|(h, &r)| if r { vec![format!("{h}_num"), format!("{h}_den")] } else { vec![h.to_string()] })
            .collect();
        w.write_record(&header).map_err(|e| e.to_string())?;
        for row in &self.rows {
            let record: Vec<String> = row
                .iter()
                .zip(&rat)
                .flat_map(|(cell, &r)| match (cell, r) {
                    (Cell::Rat(v), _) => vec![v.numer().to_string(), v.denom().to_string()],
                    (Cell::Null, true) => vec![String::new(), String::new()],
                    (Cell::Null, false) => vec![String::new()],
                    (c, _) => vec![c.table()],
                })
                .collect();
            w.write_record(&record).map_err(|e| e.to_string())?;
        }
        String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    }

    fn json(&self) -> Result<String, String> {
        let result = self.result.clone().unwrap_or_else(|| {
            Value::Array(
                self.rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> =
                            self.headers.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect();
                        Value::Object(obj)
                    })
                    .collect(),
            )
        });
        let doc = json!({ "config": self.config, "result": result });
        serde_json::to_string_pretty(&doc).map(|s| s + "\n").map_err(|e| e.to_string())
    }
}
