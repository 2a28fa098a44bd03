//! Checks of linear-programming-bound certificates given as radial profiles.

use serde::{Deserialize, Serialize};

use super::radial::{density_bound, radial_fourier, RadialProfile};
use crate::error::{Error, Result};
use crate::theta::ThetaVariant;

/// Spacing of the sign-condition grid in r.
pub const SIGN_STEP: f64 = 1e-3;
/// Spacing of the f̂ grid in s.
pub const FHAT_STEP: f64 = 1e-2;
/// Most negative f̂ value accepted as nonnegative.
pub const FHAT_FLOOR: f64 = -1e-7;

/// Sign conditions per variant:
/// ϑ′: f(r) ≤ 0 for r ≥ 2; ϑ: f(r) = 0 for r ≥ 2; ϑ⁺: additionally
/// f(r) ≥ 0 for r ≤ 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub variant: ThetaVariant,
    pub n: usize,
    pub f0: f64,
    pub fhat0: f64,
    pub ratio: f64,
    pub density_bound: f64,
    /// min over the s grid of f̂(s).
    pub min_fhat_margin: f64,
    pub min_fhat_at: f64,
    /// Smallest slack of the sign conditions on the r grid (negative when
    /// violated).
    pub sign_margin: f64,
    pub sign_margin_at: f64,
    pub feasible: bool,
}

impl CertificateCheck {
    /// The violated condition, if any.
    pub fn violation(&self) -> Option<Error> {
        if self.fhat0 <= 0.0 {
            return Some(Error::InfeasibleCertificate {
                condition: "f̂(0) > 0".into(),
                location: 0.0,
                margin: self.fhat0,
            });
        }
        if self.sign_margin < -SIGN_TOL {
            return Some(Error::InfeasibleCertificate {
                condition: format!("{} sign condition", self.variant.name()),
                location: self.sign_margin_at,
                margin: self.sign_margin,
            });
        }
        if self.min_fhat_margin < FHAT_FLOOR {
            return Some(Error::InfeasibleCertificate {
                condition: "f̂ ≥ 0".into(),
                location: self.min_fhat_at,
                margin: self.min_fhat_margin,
            });
        }
        None
    }
}

const SIGN_TOL: f64 = 1e-12;

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let k = ((hi - lo) / step).round().max(0.0) as usize;
    let mut v: Vec<f64> = (0..=k).map(|i| lo + i as f64 * step).filter(|&x| x <= hi).collect();
    if v.last().is_none_or(|&x| x < hi) {
        v.push(hi);
    }
    v
}

/// Evaluates every condition and returns the report, feasible or not.
pub fn lp_certificate_report(f: &RadialProfile, variant: ThetaVariant) -> Result<CertificateCheck> {
    let n = f.dim;
    let f0 = f.eval(0.0);
    let fhat0 = radial_fourier(f, 0.0)?;
    let mut sign_margin = f64::INFINITY;
    let mut sign_at = 0.0;
    for r in grid(0.0, f.support.max(2.0), SIGN_STEP) {
        let v = f.eval(r);
        let slack = if r >= 2.0 {
            match variant {
                ThetaVariant::ThetaPrime => -v,
                _ => -v.abs(),
            }
        } else if variant == ThetaVariant::ThetaPlus {
            v
        } else {
            f64::INFINITY
        };
        if slack < sign_margin {
            sign_margin = slack;
            sign_at = r;
        }
    }
    let mut min_fhat = f64::INFINITY;
    let mut min_at = 0.0;
    for s in grid(0.0, 10.0 + 4.0 * f.support, FHAT_STEP) {
        let v = radial_fourier(f, s)?;
        if v < min_fhat {
            min_fhat = v;
            min_at = s;
        }
    }
    let ratio = f0 / fhat0;
    let mut report = CertificateCheck {
        variant,
        n,
        f0,
        fhat0,
        ratio,
        density_bound: density_bound(ratio, n),
        min_fhat_margin: min_fhat,
        min_fhat_at: min_at,
        sign_margin,
        sign_margin_at: sign_at,
        feasible: false,
    };
    report.feasible = report.violation().is_none();
    Ok(report)
}

/// Like [`lp_certificate_report`], but a violated condition is an error.
pub fn lp_certificate_check(f: &RadialProfile, variant: ThetaVariant) -> Result<CertificateCheck> {
    let report = lp_certificate_report(f, variant)?;
    match report.violation() {
        Some(e) => Err(e),
        None => Ok(report),
    }
}
