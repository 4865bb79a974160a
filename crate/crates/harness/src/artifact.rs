//! Tables written by the scenarios: an RFC 4180 CSV plus a JSON sidecar
//! carrying provenance.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(x) => write!(f, "{x}"),
            Value::Float(x) if *x != 0.0 && !(1e-4..1e15).contains(&x.abs()) => {
                write!(f, "{x:e}")
            }
            Value::Float(x) => write!(f, "{x}"),
            Value::Text(s) => f.write_str(s),
            Value::Empty => Ok(()),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Value::Empty, Value::Float)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::Int(x as i64)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Text(x.to_string())
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub scenario: String,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub git_describe: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableArtifact {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub provenance: Provenance,
    /// Overall verdict for the validation table, `None` elsewhere.
    pub passed: Option<bool>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    name: &'a str,
    columns: &'a [String],
    rows: usize,
    provenance: &'a Provenance,
    passed: Option<bool>,
}

impl TableArtifact {
    pub fn new(name: &str, columns: &[&str], provenance: Provenance) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            provenance,
            passed: None,
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width does not match schema of {}",
            self.name
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.into_inner()
            .map_err(|e| HarnessError::io("<csv buffer>", e.into_error()))
    }

    pub fn sidecar_json(&self) -> String {
        let s = Sidecar {
            name: &self.name,
            columns: &self.columns,
            rows: self.rows.len(),
            provenance: &self.provenance,
            passed: self.passed,
        };
        serde_json::to_string_pretty(&s).expect("sidecar serialises") + "\n"
    }

    /// Writes `<dir>/<name>.csv` and `<dir>/<name>.meta.json`; returns the
    /// CSV path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let csv_path = dir.join(format!("{}.csv", self.name));
        let meta_path = dir.join(format!("{}.meta.json", self.name));
        fs::write(&csv_path, self.to_csv()?).map_err(|e| HarnessError::io(&csv_path, e))?;
        fs::write(&meta_path, self.sidecar_json()).map_err(|e| HarnessError::io(&meta_path, e))?;
        Ok(csv_path)
    }
}

pub fn git_describe() -> &'static str {
    option_env!("LIFI_ORIENT_GIT_DESCRIBE").unwrap_or("unknown")
}
