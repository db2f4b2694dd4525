use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::options::Format;
use crate::CliError;

/// A numeric table plus the metadata carried by the JSON form.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub command: &'static str,
    pub scheme: &'static str,
    pub alpha: Option<f64>,
    pub h: Option<f64>,
    pub metadata: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct JsonArtifact<'a> {
    command: &'a str,
    version: &'a str,
    scheme: &'a str,
    alpha: Option<f64>,
    h: Option<f64>,
    metadata: &'a Map<String, Value>,
    columns: &'a [String],
    rows: &'a [Vec<f64>],
}

impl Artifact {
    pub fn new(command: &'static str, columns: &[&str]) -> Self {
        Self {
            command,
            scheme: "grunwald-letnikov",
            alpha: None,
            h: None,
            metadata: Map::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.insert(key.to_string(), value.into());
    }
}

/// 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn render(artifact: &Artifact, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(&artifact.columns)?;
            for row in &artifact.rows {
                w.write_record(row.iter().map(|&v| fmt_float(v)))?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.into_error()))
        }
        Format::Json => {
            let doc = JsonArtifact {
                command: artifact.command,
                version: env!("CARGO_PKG_VERSION"),
                scheme: artifact.scheme,
                alpha: artifact.alpha,
                h: artifact.h,
                metadata: &artifact.metadata,
                columns: &artifact.columns,
                rows: &artifact.rows,
            };
            let mut out = serde_json::to_vec_pretty(&doc)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

pub fn emit(bytes: &[u8], output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}
