//! Report layout, failure classes and exit codes.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

/// Why a job did not complete.
#[derive(Clone, Debug, PartialEq)]
pub enum Failure {
    /// The job is malformed or violates a precondition; `pointer` names the
    /// offending field when known.
    Validation { pointer: Option<String>, message: String },
    Computation(String),
}

impl Failure {
    pub fn at(pointer: &str, message: impl Into<String>) -> Self {
        Failure::Validation { pointer: Some(pointer.to_string()), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation { .. } => EXIT_VALIDATION,
            Failure::Computation(_) => EXIT_COMPUTATION,
        }
    }

    pub fn to_entry(&self) -> ErrorEntry {
        match self {
            Failure::Validation { pointer, message } => {
                ErrorEntry { kind: "validation".into(), pointer: pointer.clone(), message: message.clone() }
            }
            Failure::Computation(message) => {
                ErrorEntry { kind: "computation".into(), pointer: None, message: message.clone() }
            }
        }
    }
}

impl From<deloc_core::Error> for Failure {
    fn from(e: deloc_core::Error) -> Self {
        match e {
            deloc_core::Error::Input(m) => Failure::Validation { pointer: None, message: m },
            other => Failure::Computation(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorEntry {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pointer: Option<String>,
    pub message: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub items: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub toolkit_version: String,
    pub job: Value,
    pub config: Value,
    pub results: Value,
    pub errors: Vec<ErrorEntry>,
    pub timing: Timing,
}

impl Report {
    pub fn new() -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            toolkit_version: TOOLKIT_VERSION.to_string(),
            job: Value::Null,
            config: Value::Null,
            results: Value::Null,
            errors: Vec::new(),
            timing: Timing::default(),
        }
    }
}

impl Default for Report {
    fn default() -> Self {
        Self::new()
    }
}
