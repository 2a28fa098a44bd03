//! Dense semidefinite programming.

mod certify;
mod problem;
mod sdpa;
mod solver;

pub use certify::{certify, CertificateReport};
pub use problem::{BlockMatrix, BlockSpec, BlockValue, Constraint, Entry, SdpProblem};
pub use sdpa::{to_sdpa_string, write_sdpa};
pub use solver::{presolve, solve, IterationRecord, PresolveReport, SdpSolution, SolveStatus, SolverOptions};
