//! `packbound certify`: checks a radial profile as an LP-bound certificate.

use clap::{Args, ValueEnum};
use packbound_core::euclid::{ball_autocorrelation, lp_certificate_report, CertificateCheck, RadialProfile, MAX_DIM};
use packbound_core::ThetaVariant;

use crate::failure::{read_file, Failure, INFEASIBLE_CERTIFICATE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    ThetaPrime,
    Theta,
    ThetaPlus,
}

impl From<Variant> for ThetaVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::ThetaPrime => ThetaVariant::ThetaPrime,
            Variant::Theta => ThetaVariant::Theta,
            Variant::ThetaPlus => ThetaVariant::ThetaPlus,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    /// `ball-autocorr`, `triangle`, `gaussian`, or a JSON profile file.
    #[arg(long)]
    pub profile: String,

    /// Dimension; required for the built-in profiles, overrides the file's.
    #[arg(long)]
    pub dim: Option<usize>,

    #[arg(long, value_enum, default_value = "theta")]
    pub variant: Variant,

    /// Support radius of the Gaussian profile.
    #[arg(long, default_value_t = 6.0)]
    pub cutoff: f64,
}

fn need_dim(dim: Option<usize>, what: &str) -> Result<usize, Failure> {
    dim.ok_or_else(|| Failure::usage(format!("--dim is required for the {what} profile")))
}

fn profile(args: &CertifyArgs) -> Result<RadialProfile, Failure> {
    if let Some(d) = args.dim {
        if d == 0 || d > MAX_DIM {
            return Err(Failure::usage(format!("--dim must lie in 1..={MAX_DIM}")));
        }
    }
    Ok(match args.profile.as_str() {
        "ball-autocorr" => ball_autocorrelation(need_dim(args.dim, "ball-autocorr")?)?,
        "gaussian" => RadialProfile::gaussian(need_dim(args.dim, "gaussian")?, args.cutoff)?,
        "triangle" => {
            if args.dim.is_some_and(|d| d != 1) {
                return Err(Failure::usage("the triangle profile is one-dimensional"));
            }
            RadialProfile::triangle()
        }
        path => {
            let f: RadialProfile = serde_json::from_str(&read_file(path.as_ref())?)?;
            match args.dim {
                Some(d) => RadialProfile::new(d, f.support, f.profile)?,
                None => f,
            }
        }
    })
}

pub fn run(args: &CertifyArgs) -> Result<(CertificateCheck, i32), Failure> {
    let report = lp_certificate_report(&profile(args)?, args.variant.into())?;
    let code = if report.feasible { 0 } else { INFEASIBLE_CERTIFICATE };
    Ok((report, code))
}
