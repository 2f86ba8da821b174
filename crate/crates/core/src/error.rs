use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pipeline stage in which an approximation run failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Hypothesis,
    MinorSelection,
    Regularization,
    Preparation,
    Division,
    OneVariableSystem,
    OneVariableSolve,
    Reconstruction,
    Refinement,
    Verification,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Hypothesis => "hypothesis check",
            Stage::MinorSelection => "minor selection",
            Stage::Regularization => "regularization",
            Stage::Preparation => "preparation",
            Stage::Division => "division",
            Stage::OneVariableSystem => "one-variable system",
            Stage::OneVariableSolve => "one-variable solve",
            Stage::Reconstruction => "reconstruction",
            Stage::Refinement => "refinement",
            Stage::Verification => "verification",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),
    #[error("variable universes differ: [{0}] vs [{1}]")]
    UniverseMismatch(String, String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("precision too low: {0}")]
    Precision(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("series is not y-regular: {0}")]
    NotRegular(String),
    #[error("hypothesis violated: {message}")]
    HypothesisViolated { message: String, measured_order: Option<u32> },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{stage} failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Parse { line, column, message: message.into() }
    }

    pub fn at(self, stage: Stage) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage { stage, source: Box::new(e) },
        }
    }

    /// Innermost error, skipping stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: Stage) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: Stage) -> Result<T> {
        self.map_err(|e| e.at(stage))
    }
}
