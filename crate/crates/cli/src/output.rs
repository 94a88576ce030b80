use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// A command's payload: the JSON result plus its tabular rendering.
pub struct Report {
    pub result: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub seeds: Vec<u64>,
    /// One-line human summary for standard error.
    pub summary: Option<String>,
}

impl Report {
    pub fn new(result: impl Serialize, header: &[&str]) -> Result<Self, CliError> {
        Ok(Report {
            result: serde_json::to_value(result).map_err(partsep::Error::from)?,
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            seeds: Vec::new(),
            summary: None,
        })
    }

    pub fn row(&mut self, cells: impl IntoIterator<Item = impl ToString>) {
        self.rows.push(cells.into_iter().map(|c| c.to_string()).collect());
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub params: Value,
    pub seeds: Vec<u64>,
    pub version: &'static str,
    pub timestamp: String,
    pub argv: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, params: Value, seeds: Vec<u64>) -> Self {
        Manifest {
            command: command.to_string(),
            params,
            seeds,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            argv: std::env::args().collect(),
        }
    }
}

fn render_csv(manifest: &Manifest, report: &Report) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    let meta = serde_json::to_string(manifest).map_err(partsep::Error::from)?;
    writeln!(out, "# manifest: {meta}").expect("write to Vec");
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&report.header).map_err(CliError::csv)?;
    for r in &report.rows {
        w.write_record(r).map_err(CliError::csv)?;
    }
    w.into_inner().map_err(|e| CliError::Output(e.to_string()))
}

pub fn emit(manifest: &Manifest, report: &Report, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let bytes = match format {
        Format::Json => {
            let doc = json!({ "manifest": manifest, "result": report.result });
            let mut s = serde_json::to_string_pretty(&doc).map_err(partsep::Error::from)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => render_csv(manifest, report)?,
    };
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .lock()
            .write_all(&bytes)
            .map_err(|e| CliError::Output(e.to_string())),
    }
}

/// Read a JSON input. A full output document of this tool is accepted too:
/// its `result` is used, descending into the first of `fields` that holds an
/// object.
pub fn read_input<T: serde::de::DeserializeOwned>(path: &PathBuf, fields: &[&str]) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut value: Value = serde_json::from_str(&text).map_err(partsep::Error::from)?;
    if value.get("manifest").is_some() {
        if let Some(result) = value.get_mut("result") {
            value = result.take();
        }
    }
    if let Some(f) = fields.iter().find(|f| value.get(**f).is_some_and(Value::is_object)) {
        value = value[*f].take();
    }
    serde_json::from_value(value).map_err(|e| partsep::Error::from(e).into())
}
