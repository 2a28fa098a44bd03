use thiserror::Error;

use crate::sdp::SolveStatus;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what}: size {size} exceeds cap {cap}")]
    SizeCapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("point lies outside the simplicial complex")]
    OutsideComplex,
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("infeasible input: {0}")]
    InfeasibleInput(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("quadrature failed to converge at s = {s} (estimated error {error:.3e})")]
    QuadratureFailure { s: f64, error: f64 },
    #[error("certificate violates {condition} at {location} (margin {margin:.3e})")]
    InfeasibleCertificate {
        condition: String,
        location: f64,
        margin: f64,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("solver finished with status {0:?}")]
    Solver(SolveStatus),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::SizeCapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}
