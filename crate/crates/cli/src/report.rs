//! Artifact writers. All output is UTF-8 CSV or JSON with deterministic
//! field order and float formatting, so identical runs produce identical
//! bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// CSV field escaping; values here are simple, but user keys pass through.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shortest round-trip float formatting (deterministic).
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub struct CsvWriter {
    writer: BufWriter<File>,
    path: PathBuf,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &str) -> Result<Self, CliError> {
        let file = File::create(path)
            .map_err(|e| CliError::data(format!("cannot create {}: {e}", path.display())))?;
        let mut w = CsvWriter { writer: BufWriter::new(file), path: path.to_path_buf() };
        w.row(header)?;
        Ok(w)
    }

    pub fn row(&mut self, line: &str) -> Result<(), CliError> {
        writeln!(self.writer, "{line}")
            .map_err(|e| CliError::data(format!("write {}: {e}", self.path.display())))
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer
            .flush()
            .map_err(|e| CliError::data(format!("flush {}: {e}", self.path.display())))
    }
}

/// Writes pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::data(format!("serialize {}: {e}", path.display())))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

/// Machine-readable index of one command's outputs.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub seed: u64,
    pub parameters: serde_json::Value,
    pub artifacts: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, seed: u64, parameters: serde_json::Value) -> Self {
        Manifest { command: command.to_string(), seed, parameters, artifacts: Vec::new() }
    }

    pub fn add(&mut self, path: &Path) {
        self.artifacts
            .push(path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    }

    pub fn write(mut self, out_dir: &Path, name: &str) -> Result<(), CliError> {
        self.artifacts.sort();
        write_json(&out_dir.join(name), &self)
    }
}
