//! The machine-readable record every subcommand emits.
//!
//! Field order is fixed by the struct layout and `results` is a sorted map,
//! so identical invocations give byte-identical output. Wall time
//! is printed to stderr and never enters the record.

use std::fmt::Display;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ContractViolation,
    GuardExceeded,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::ContractViolation => 1,
            Status::GuardExceeded => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// A claimed bound against the measured value. `source` names the bound by
/// its role.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub source: String,
    pub claimed: String,
    pub measured: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub results: Map<String, Value>,
    pub bound_checks: Vec<BoundCheck>,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64) -> Self {
        RunReport {
            command,
            seed,
            inputs: Vec::new(),
            status: Status::Ok,
            error: None,
            results: Map::new(),
            bound_checks: Vec::new(),
        }
    }

    /// Reads an input file and records its digest.
    pub fn read_input(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialize");
        self.results.insert(key.to_string(), value);
    }

    pub fn check(&mut self, source: &str, claimed: impl Display, measured: impl Display, pass: bool) {
        self.bound_checks.push(BoundCheck {
            source: source.to_string(),
            claimed: claimed.to_string(),
            measured: measured.to_string(),
            pass,
        });
    }

    /// Marks the run as refused on a violated precondition.
    pub fn refuse(&mut self, msg: impl Into<String>) {
        self.status = Status::ContractViolation;
        self.error = Some(msg.into());
    }

    /// Records a failed run; size guards map to their own status.
    pub fn fail(&mut self, err: &anyhow::Error) {
        let guard = err.chain().any(|e| e.downcast_ref::<tuiso::Error>().is_some_and(tuiso::Error::is_guard));
        self.status = if guard {
            Status::GuardExceeded
        } else {
            Status::ContractViolation
        };
        self.error = Some(format!("{err:#}"));
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}
