//! CSV/JSON writers and the error-to-exit-code mapping.

use serde::Serialize;
use spinorlab_core::Error;
use std::path::Path;

/// Scientific notation with 17 significant digits.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new(header: &str) -> Self {
        Self { buf: format!("{header}\n") }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|v| fmt(*v)).collect();
        self.line(&cells.join(","));
    }

    pub fn line(&mut self, text: &str) {
        self.buf.push_str(text);
        self.buf.push('\n');
    }

    pub fn save(&self, path: &Path) -> Result<(), Failure> {
        std::fs::write(path, &self.buf).map_err(Failure::io)
    }
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(Failure::io)
}

pub fn write_meta(out: &Path, command: &impl Serialize, results: serde_json::Value) -> Result<(), Failure> {
    let meta = serde_json::json!({
        "tool": "spinorlab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "results": results,
    });
    write_json(&out.join("meta.json"), &meta)
}

#[derive(Debug)]
pub enum Failure {
    /// Bad input or a point outside the domain: exit 2.
    Validation(String),
    /// Solver failure or blowup: exit 3.
    Numerical(String),
    /// File system trouble: exit 1.
    Io(String),
    /// Some sweep points failed; carries the worst exit code.
    Sweep(u8),
}

impl Failure {
    pub fn io(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Sweep(c) => *c,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Numerical(m) | Failure::Io(m) => m,
            Failure::Sweep(_) => "some sweep points failed",
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::ParamOutOfRange(_)
            | Error::GridTooCoarse(_)
            | Error::UnsupportedLedger(_)
            | Error::OutsideExistenceDomain { .. }
            | Error::NoTurningPoint { .. }
            | Error::MeshMismatch(_)
            | Error::GapCollapse(..)
            | Error::CflViolation { .. }
            | Error::NonDecayingField(_) => Failure::Validation(msg),
            Error::QuadratureFailure(_)
            | Error::NegativeRadicand { .. }
            | Error::EigensolveFailure(_)
            | Error::RootNotFound(_) => Failure::Numerical(msg),
        }
    }
}
