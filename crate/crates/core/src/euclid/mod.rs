//! Euclidean-limit sweeps and linear-programming-bound certificates.

pub mod bessel;
mod certificate;
pub mod quadrature;
mod radial;
mod report;
mod sweep;

pub use bessel::{bessel_j, unit_ball_volume, unit_sphere_area};
pub use certificate::{lp_certificate_check, lp_certificate_report, CertificateCheck, FHAT_FLOOR, FHAT_STEP, SIGN_STEP};
pub use radial::{ball_autocorrelation, density_bound, radial_fourier, Profile, RadialProfile, MAX_DIM};
pub use report::{sandwich_consistency_report, sandwich_report, SandwichReport, SandwichRow, CHAIN_SLACK};
pub use sweep::{delta_sweep, read_rows, RefinementCheck, SweepRecord, SweepRow};
