use serde::Serialize;
use vpp_ffr::{AllocError, Error, FreqError, ParamError, RequirementError, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// Bad input: unreadable file, malformed scenario, invalid parameters.
    Validation,
    /// The numerics failed for a valid input.
    Numeric,
    /// The limits or allocation constraints cannot be met.
    Unsatisfiable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Validation,
            message: msg.into(),
        }
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Numeric,
            message: msg.into(),
        }
    }

    pub fn unsatisfiable(msg: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Unsatisfiable,
            message: msg.into(),
        }
    }

    pub fn code(&self) -> i32 {
        match self.kind {
            ErrorKind::Validation => 2,
            ErrorKind::Numeric => 3,
            ErrorKind::Unsatisfiable => 4,
        }
    }

    /// Single-line JSON for the error stream.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": {
                "kind": self.kind,
                "code": self.code(),
                "message": self.message,
            }
        })
        .to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<FreqError> for CliError {
    fn from(e: FreqError) -> Self {
        match e {
            FreqError::Param(p) => p.into(),
            other => CliError::numeric(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Param(p) => p.into(),
            other => CliError::numeric(other.to_string()),
        }
    }
}

impl From<RequirementError> for CliError {
    fn from(e: RequirementError) -> Self {
        match e {
            RequirementError::DeadbandExceedsLimit { .. } | RequirementError::Unsatisfiable(_) => {
                CliError::unsatisfiable(e.to_string())
            }
            RequirementError::Freq(f) => f.into(),
            RequirementError::Sim(s) => s.into(),
            RequirementError::Param(p) => p.into(),
        }
    }
}

impl From<AllocError> for CliError {
    fn from(e: AllocError) -> Self {
        match e {
            AllocError::Infeasible(_) => CliError::unsatisfiable(e.to_string()),
            AllocError::EmptyFront => CliError::numeric(e.to_string()),
            AllocError::InvalidWeights(_) | AllocError::MissingCompensation => CliError::validation(e.to_string()),
            AllocError::Param(p) => p.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Param(x) => x.into(),
            Error::Freq(x) => x.into(),
            Error::Sim(x) => x.into(),
            Error::Requirement(x) => x.into(),
            Error::Alloc(x) => x.into(),
        }
    }
}
