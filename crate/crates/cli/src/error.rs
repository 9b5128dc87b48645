use std::fmt;

use serde_json::{json, Value};
use toric_core::exact::ExactError;
use toric_core::germ::GermError;
use toric_core::toric::ToricError;

/// A syntax or constraint error in an input file, positioned 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Precondition,
    Precision,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Parse => 1,
            Self::Precondition => 2,
            Self::Precision => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Parse => "parse",
            Self::Precondition => "precondition",
            Self::Precision => "precision",
        }
    }
}

/// Failure of a command; rendered as one JSON object on standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    pub position: Option<(usize, usize)>,
}

impl CliError {
    pub fn precondition(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Precondition,
            message: message.into(),
            position: None,
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Parse,
            message: message.into(),
            position: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    pub fn to_json(&self) -> Value {
        let mut body = json!({
            "kind": self.kind.as_str(),
            "message": self.message,
            "exit_code": self.exit_code(),
        });
        if let Some((line, column)) = self.position {
            body["line"] = json!(line);
            body["column"] = json!(column);
        }
        json!({ "error": body })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((l, c)) => write!(f, "{} error at line {l}, column {c}: {}", self.kind.as_str(), self.message),
            None => write!(f, "{} error: {}", self.kind.as_str(), self.message),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        Self {
            kind: ErrorKind::Parse,
            message: e.message,
            position: Some((e.line, e.column)),
        }
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        Self::precondition(e.to_string())
    }
}

impl From<ToricError> for CliError {
    fn from(e: ToricError) -> Self {
        Self::precondition(e.to_string())
    }
}

impl From<GermError> for CliError {
    fn from(e: GermError) -> Self {
        // Library coordinates are 0-based; reports are 1-based.
        let (kind, message) = match &e {
            GermError::Precision { index, bits, .. } if index.is_empty() => (
                ErrorKind::Precision,
                format!("conjugacy residual did not reach the requested precision (working precision {bits} bits)"),
            ),
            GermError::Precision { index, coordinate, bits } => (
                ErrorKind::Precision,
                format!("divisor at {index:?} in coordinate {} is below 2^-(P/2) for P = {bits}", coordinate + 1),
            ),
            GermError::ZeroDivisor { index, coordinate } => (
                ErrorKind::Precondition,
                format!("zero divisor at non-resonant monomial {index:?} in coordinate {}", coordinate + 1),
            ),
            _ => (ErrorKind::Precondition, e.to_string()),
        };
        Self {
            kind,
            message,
            position: None,
        }
    }
}
