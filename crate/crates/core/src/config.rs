//! Tolerances and exact-search caps shared by every module.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute slack for comparisons between bound values.
    pub bound: f64,
    /// Strict-inequality slack for distances.
    pub geom: f64,
    /// Eigenvalue floor accepted as positive semidefinite.
    pub psd: f64,
    /// Relative duality gap for SDP termination.
    pub gap: f64,
    /// Scaled primal/dual residual for SDP termination.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            bound: 1e-5,
            geom: 1e-9,
            psd: 1e-8,
            gap: 1e-8,
            residual: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Caps {
    pub independence: usize,
    pub chromatic: usize,
    pub homomorphism: usize,
    pub cover: usize,
    pub theta: usize,
    pub theta_prime: usize,
    pub lasserre_level: usize,
    pub lasserre_family: usize,
    pub enumeration: usize,
    pub sdp_order: usize,
    pub sdp_constraints: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            independence: 40,
            chromatic: 24,
            homomorphism: 10,
            cover: 20,
            theta: 400,
            theta_prime: 400,
            lasserre_level: 3,
            lasserre_family: 2000,
            enumeration: 50_000,
            sdp_order: 2000,
            sdp_constraints: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Config {
    pub tol: Tolerances,
    pub caps: Caps,
}
