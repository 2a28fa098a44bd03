//! Exit codes and the error type carrying them.

use std::fmt;

use packbound_core::Error;

pub const PARSE: i32 = 2;
pub const CAP: i32 = 3;
pub const SOLVER: i32 = 4;
pub const INFEASIBLE_CERTIFICATE: i32 = 5;
/// Some axiom case failed.
pub const AXIOM_FAILURE: i32 = 1;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure::new(PARSE, message)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Exit code for a library error.
pub fn code_of(e: &Error) -> i32 {
    match e {
        Error::SizeCapExceeded { .. } => CAP,
        Error::Solver(_) | Error::NotPsd { .. } | Error::QuadratureFailure { .. } => SOLVER,
        Error::InfeasibleCertificate { .. } => INFEASIBLE_CERTIFICATE,
        _ => PARSE,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(code_of(&e), e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::usage(format!("JSON: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::usage(format!("CSV: {e}"))
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}
