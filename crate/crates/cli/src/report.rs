//! Report assembly and deterministic output.
//!
//! Every float is rounded to 12 significant digits and printed in shortest
//! round-trip form, both in JSON and in CSV.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File name stem; the report's command name is prefixed.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub json: Value,
    pub tables: Vec<Table>,
}

pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// A float as written in CSV cells.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        Value::from(round12(x)).to_string()
    }
}

fn normalize(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = Value::from(round12(x));
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(normalize),
        Value::Object(m) => m.values_mut().for_each(normalize),
        _ => {}
    }
}

impl Report {
    /// Wraps `result` with the command name and the effective configuration.
    pub fn new(command: &str, cfg: &RunConfig, result: impl Serialize, tables: Vec<Table>) -> Result<Self> {
        let mut json = serde_json::json!({
            "command": command,
            "config": cfg,
            "result": result,
        });
        normalize(&mut json);
        Ok(Self { command: command.into(), json, tables })
    }

    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("report values serialize");
        s.push('\n');
        s
    }

    pub fn table_file(&self, t: &Table) -> String {
        if t.name.is_empty() {
            format!("{}.csv", self.command)
        } else {
            format!("{}_{}.csv", self.command, t.name)
        }
    }

    pub fn write_csv<W: Write>(t: &Table, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&t.header)?;
        for row in &t.rows {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Writes the requested files into `dir` and returns their names.
    pub fn write_to(&self, dir: &Path, format: Format) -> Result<Vec<String>> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::new();
        if matches!(format, Format::Json | Format::Both) {
            let name = format!("{}.json", self.command);
            std::fs::write(dir.join(&name), self.json_text())?;
            written.push(name);
        }
        if matches!(format, Format::Csv | Format::Both) {
            for t in &self.tables {
                let name = self.table_file(t);
                let file = std::fs::File::create(dir.join(&name))?;
                Self::write_csv(t, std::io::BufWriter::new(file))?;
                written.push(name);
            }
        }
        Ok(written)
    }
}
