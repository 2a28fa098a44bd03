//! Radial profiles and their n-dimensional Fourier transforms.
//!
//! Convention: f̂(ξ) = ∫ f(x) e^{−2πi⟨x,ξ⟩} dx, so for radial f
//! f̂(s) = |S^{n−1}| ∫₀^R f(r) r^{n−1} Λ_{n/2−1}(2πrs) dr with
//! Λ_ν(x) = Γ(ν+1)(2/x)^ν J_ν(x).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bessel::{approximate_zeros, normalized_bessel, unit_ball_volume, unit_sphere_area};
use super::quadrature::integrate_panels;
use crate::error::{Error, Result};

pub const MAX_DIM: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// On [breaks[i], breaks[i+1]] the value is Σ_k coeffs[i][k] (r − breaks[i])^k.
    Piecewise { breaks: Vec<f64>, coeffs: Vec<Vec<f64>> },
    /// Samples interpolated by local Lagrange polynomials of degree `order`.
    Tabulated { r: Vec<f64>, f: Vec<f64>, order: usize },
    /// vol(B₁ⁿ(0) ∩ B₁ⁿ(r e₁)), supported on [0, 2].
    BallAutocorrelation,
    /// exp(−π r²), cut off at the support radius.
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr")]
pub struct RadialProfile {
    pub dim: usize,
    pub support: f64,
    pub profile: Profile,
}

#[derive(Deserialize)]
struct ProfileRepr {
    dim: usize,
    support: f64,
    profile: Profile,
}

impl TryFrom<ProfileRepr> for RadialProfile {
    type Error = Error;

    fn try_from(r: ProfileRepr) -> Result<Self> {
        RadialProfile::new(r.dim, r.support, r.profile)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// Lens volume of two unit balls in ℝⁿ at center distance r ∈ [0, 2].
fn lens_volume(n: usize, r: f64) -> f64 {
    let r = r.clamp(0.0, 2.0);
    match n {
        1 => 2.0 - r,
        2 => 2.0 * (r / 2.0).acos() - 0.5 * r * (4.0 - r * r).sqrt(),
        3 => PI / 12.0 * (4.0 + r) * (2.0 - r).powi(2),
        4 => {
            let a = 0.5 * r;
            let f = (a * (5.0 - 2.0 * a * a) * (1.0 - a * a).sqrt() + 3.0 * a.asin()) / 8.0;
            PI * PI / 2.0 - 8.0 * PI / 3.0 * f
        }
        _ => unreachable!("checked by the constructor"),
    }
}

impl RadialProfile {
    pub fn new(dim: usize, support: f64, profile: Profile) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(invalid(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        if !(support > 0.0 && support.is_finite()) {
            return Err(invalid("support radius must be positive and finite"));
        }
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|x| x.is_finite());
        match &profile {
            Profile::Piecewise { breaks, coeffs } => {
                if breaks.len() < 2 || breaks[0] != 0.0 || !increasing(breaks) || *breaks.last().expect("non-empty") > support + 1e-12 {
                    return Err(invalid("breaks must increase from 0 to at most the support radius"));
                }
                if coeffs.len() + 1 != breaks.len() || coeffs.iter().any(|c| c.is_empty() || c.iter().any(|x| !x.is_finite())) {
                    return Err(invalid("one non-empty coefficient list per piece"));
                }
                for i in 1..coeffs.len() {
                    let left = horner(&coeffs[i - 1], breaks[i] - breaks[i - 1]);
                    if (left - coeffs[i][0]).abs() > 1e-9 * (1.0 + left.abs()) {
                        return Err(invalid(format!("discontinuity at r = {}", breaks[i])));
                    }
                }
            }
            Profile::Tabulated { r, f, order } => {
                if r.len() < 2 || r.len() != f.len() || r[0] != 0.0 || !increasing(r) || *r.last().expect("non-empty") > support + 1e-12 {
                    return Err(invalid("samples must start at 0, increase, and stay inside the support"));
                }
                if f.iter().any(|x| !x.is_finite()) || !(*order == 1 || *order == 3) || r.len() <= *order {
                    return Err(invalid("interpolation order must be 1 or 3 with enough finite samples"));
                }
            }
            Profile::BallAutocorrelation => {
                if dim > 4 || (support - 2.0).abs() > 1e-12 {
                    return Err(invalid("ball autocorrelation needs 1 ≤ n ≤ 4 and support 2"));
                }
            }
            Profile::Gaussian => {}
        }
        Ok(RadialProfile { dim, support, profile })
    }

    /// The triangle 2 − r on [0, 2] (n = 1 autocorrelation).
    pub fn triangle() -> Self {
        RadialProfile::new(
            1,
            2.0,
            Profile::Piecewise {
                breaks: vec![0.0, 2.0],
                coeffs: vec![vec![2.0, -1.0]],
            },
        )
        .expect("valid profile")
    }

    pub fn gaussian(dim: usize, cutoff: f64) -> Result<Self> {
        RadialProfile::new(dim, cutoff, Profile::Gaussian)
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        if r > self.support + 1e-12 {
            return 0.0;
        }
        match &self.profile {
            Profile::Piecewise { breaks, coeffs } => {
                if r > *breaks.last().expect("non-empty") {
                    return 0.0;
                }
                let i = breaks.partition_point(|&b| b <= r).clamp(1, coeffs.len()) - 1;
                horner(&coeffs[i], r - breaks[i])
            }
            Profile::Tabulated { r: xs, f, order } => {
                let last = *xs.last().expect("non-empty");
                if r > last {
                    return 0.0;
                }
                let i = xs.partition_point(|&x| x <= r).clamp(1, xs.len() - 1) - 1;
                let lo = i.saturating_sub((order - 1) / 2).min(xs.len() - 1 - order);
                let idx: Vec<usize> = (lo..=lo + order).collect();
                idx.iter()
                    .map(|&a| {
                        let basis: f64 = idx.iter().filter(|&&b| b != a).map(|&b| (r - xs[b]) / (xs[a] - xs[b])).product();
                        f[a] * basis
                    })
                    .sum()
            }
            Profile::BallAutocorrelation => lens_volume(self.dim, r),
            Profile::Gaussian => (-PI * r * r).exp(),
        }
    }

    /// Points where the profile may lose smoothness.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = match &self.profile {
            Profile::Piecewise { breaks, .. } => breaks.clone(),
            Profile::Tabulated { r, .. } => r.clone(),
            _ => vec![0.0],
        };
        b.push(self.support);
        b.sort_by(f64::total_cmp);
        b.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        b
    }

    /// ∫|f(x)| dx over ℝⁿ, the scale for quadrature tolerances.
    fn abs_mass(&self) -> f64 {
        let n = self.dim as i32;
        let q = integrate_panels(&|r| self.eval(r).abs() * r.powi(n - 1), &self.breakpoints(), 1e-14);
        unit_sphere_area(self.dim) * q.value
    }
}

/// f̂(s) for a radial profile, with relative accuracy about 1e−9 of ∫|f|.
pub fn radial_fourier(f: &RadialProfile, s: f64) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(invalid("frequency must be finite and nonnegative"));
    }
    let n = f.dim;
    let nu = n as f64 / 2.0 - 1.0;
    let w = 2.0 * PI * s;
    let mut breaks = f.breakpoints();
    if s > 0.0 {
        breaks.extend(approximate_zeros(nu, w * f.support).into_iter().map(|z| z / w));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    }
    let integrand = |r: f64| {
        let k = if s == 0.0 { 1.0 } else { normalized_bessel(nu, w * r) };
        f.eval(r) * r.powi(n as i32 - 1) * k
    };
    let area = unit_sphere_area(n);
    let tol = 1e-11 * f.abs_mass().max(1e-300) / area;
    let q = integrate_panels(&integrand, &breaks, tol);
    if !q.converged {
        return Err(Error::QuadratureFailure { s, error: q.error * area });
    }
    Ok(area * q.value)
}

/// f = 1_{B₁ⁿ} * 1_{B₁ⁿ} for 1 ≤ n ≤ 4.
pub fn ball_autocorrelation(n: usize) -> Result<RadialProfile> {
    RadialProfile::new(n, 2.0, Profile::BallAutocorrelation)
}

/// Density bound f(0)/f̂(0) · vol(B₁ⁿ) implied by a certificate ratio.
pub fn density_bound(ratio: f64, n: usize) -> f64 {
    ratio * unit_ball_volume(n)
}
