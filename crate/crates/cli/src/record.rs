use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

/// Where a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Matrix,
    BruteForce,
    ClosedForm,
    Bijection,
    MonteCarlo,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Matrix => "matrix",
            Provenance::BruteForce => "brute_force",
            Provenance::ClosedForm => "closed_form",
            Provenance::Bijection => "bijection",
            Provenance::MonteCarlo => "monte_carlo",
        }
    }
}

/// Exact values are strings (`"996"`, `"286/3"`); estimates carry their
/// standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Exact(String),
    Estimate { estimate: f64, stderr: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub value: Value,
    pub provenance: Provenance,
}

impl OutputRecord {
    pub fn exact(command: &str, value: impl ToString, provenance: Provenance) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            value: Value::Exact(value.to_string()),
            provenance,
        }
    }

    pub fn estimate(command: &str, estimate: f64, stderr: f64) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            value: Value::Estimate { estimate, stderr },
            provenance: Provenance::MonteCarlo,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Column order of the CSV output. `parameters` is `key=value` pairs
/// joined by `;` in key order; `value` is empty for estimates.
pub const CSV_HEADER: [&str; 6] = [
    "command",
    "parameters",
    "value",
    "estimate",
    "stderr",
    "provenance",
];

pub fn write_records<W: Write>(out: W, format: Format, records: &[OutputRecord]) -> io::Result<()> {
    match format {
        Format::Json => write_json(out, records),
        Format::Csv => write_csv(out, records),
    }
}

fn write_json<W: Write>(mut out: W, records: &[OutputRecord]) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

fn write_csv<W: Write>(out: W, records: &[OutputRecord]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let params = r
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        let (value, estimate, stderr) = match &r.value {
            Value::Exact(s) => (s.clone(), String::new(), String::new()),
            Value::Estimate { estimate, stderr } => {
                (String::new(), estimate.to_string(), stderr.to_string())
            }
        };
        w.write_record([
            r.command.as_str(),
            &params,
            &value,
            &estimate,
            &stderr,
            r.provenance.as_str(),
        ])?;
    }
    w.flush()
}
