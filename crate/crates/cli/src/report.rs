use std::collections::BTreeMap;

use artin_approx::Error;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// A refinement certified to the requested precision.
    Certified,
    /// A computation without a certificate finished.
    Ok,
    /// The probe found a row where a bound was met but no solution came out.
    Defects,
    Stalled,
    HypothesisViolated,
    ParseError,
    CapacityExceeded,
    Failed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Certified | Status::Ok => 0,
            Status::Stalled | Status::HypothesisViolated => 2,
            Status::ParseError => 3,
            Status::CapacityExceeded => 4,
            Status::Defects | Status::Failed => 1,
        }
    }

    pub fn of_error(e: &Error) -> Status {
        match e.root() {
            Error::Parse { .. } | Error::UnknownVariable(_) => Status::ParseError,
            Error::Capacity(_) => Status::CapacityExceeded,
            Error::HypothesisViolated { .. } | Error::Precondition(_) | Error::NotRegular(_) | Error::Precision(_) => {
                Status::HypothesisViolated
            }
            _ => Status::Failed,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    Status::of_error(e).exit_code()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_order: Option<u32>,
}

impl ErrorInfo {
    pub fn of(e: &Error) -> ErrorInfo {
        let stage = match e {
            Error::Stage { stage, .. } => Some(stage.to_string()),
            _ => None,
        };
        let (line, column) = match e.root() {
            Error::Parse { line, column, .. } if *line > 0 => (Some(*line), Some(*column)),
            _ => (None, None),
        };
        let measured_order = match e.root() {
            Error::HypothesisViolated { measured_order, .. } => *measured_order,
            _ => None,
        };
        let kind = match e.root() {
            Error::DomainMismatch(..) => "domain-mismatch",
            Error::UniverseMismatch(..) => "universe-mismatch",
            Error::UnknownVariable(_) => "unknown-variable",
            Error::Parse { .. } => "parse",
            Error::Capacity(_) => "capacity",
            Error::Precision(_) => "precision",
            Error::Dimension(_) => "dimension",
            Error::NotRegular(_) => "not-regular",
            Error::HypothesisViolated { .. } => "hypothesis-violated",
            Error::Precondition(_) => "precondition",
            Error::Unsupported(_) => "unsupported",
            Error::Config(_) => "config",
            Error::Stage { .. } => "stage",
        };
        ErrorInfo { kind: kind.into(), stage, message: e.to_string(), line, column, measured_order }
    }
}

/// Machine-readable result of one command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    /// Effective inputs: the file's keys after command-line overrides.
    pub inputs: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub outputs: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    /// Wall-clock time; the only nondeterministic field.
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub text: String,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}
