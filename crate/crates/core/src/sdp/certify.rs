use serde::{Deserialize, Serialize};

use super::problem::SdpProblem;
use super::solver::SdpSolution;
use crate::config::Tolerances;
use crate::linalg;

/// Independent check of a primal/dual pair. Everything is recomputed from
/// `X`, `y` and the problem data; the solver's own `Z` and residuals are
/// not trusted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub primal_min_eigenvalue: f64,
    /// Smallest eigenvalue of C − 𝒜*y.
    pub dual_min_eigenvalue: f64,
    /// max |⟨Aᵢ, X⟩ − bᵢ| / (1 + |b|∞)
    pub primal_residual: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub psd_ok: bool,
    pub residual_ok: bool,
    pub gap_ok: bool,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.psd_ok && self.residual_ok && self.gap_ok
    }
}

pub fn certify(sol: &SdpSolution, p: &SdpProblem, tol: &Tolerances) -> CertificateReport {
    let c = p.objective_matrix();
    let mut s = c.clone();
    s.axpy(-1.0, &p.adjoint(&sol.y));
    let primal_min = sol.x.min_eigenvalue();
    let dual_min = s.min_eigenvalue();
    let ax = p.apply(&sol.x);
    let b = p.rhs();
    let b_inf = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let res = ax
        .iter()
        .zip(&b)
        .fold(0.0f64, |m, (a, bb)| m.max((a - bb).abs()))
        / (1.0 + b_inf);
    let pobj = c.dot(&sol.x);
    let dobj = linalg::dot(&b, &sol.y);
    let gap = (pobj - dobj).abs();
    CertificateReport {
        primal_min_eigenvalue: primal_min,
        dual_min_eigenvalue: dual_min,
        primal_residual: res,
        primal_objective: pobj,
        dual_objective: dobj,
        gap,
        psd_ok: primal_min >= -tol.psd && dual_min >= -tol.psd,
        residual_ok: res <= tol.residual,
        gap_ok: gap <= tol.gap * (1.0 + pobj.abs()),
    }
}
