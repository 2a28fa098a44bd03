//! Named packing bound functions, evaluated on point sets or conflict graphs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::geometry::{cov, pack, PointConfiguration};
use crate::graph::{chromatic_number, independence_number, Graph};
use crate::lasserre::{las_plain, las_prime};
use crate::theta::{theta, ThetaVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundId {
    Pack,
    LasPrime(usize),
    LasPlain(usize),
    Theta(ThetaVariant),
    /// χ of the complement of the conflict graph.
    ChiCover,
    Cov,
}

impl BoundId {
    /// The chain pack ≤ las′₁ ≤ ϑ′ ≤ ϑ ≤ ϑ⁺ ≤ χ-cover ≤ cov.
    pub const CHAIN: [BoundId; 7] = [
        BoundId::Pack,
        BoundId::LasPrime(1),
        BoundId::Theta(ThetaVariant::ThetaPrime),
        BoundId::Theta(ThetaVariant::Theta),
        BoundId::Theta(ThetaVariant::ThetaPlus),
        BoundId::ChiCover,
        BoundId::Cov,
    ];

    pub fn name(&self) -> String {
        match self {
            BoundId::Pack => "pack".into(),
            BoundId::Cov => "cov".into(),
            BoundId::ChiCover => "chi-cover".into(),
            BoundId::Theta(ThetaVariant::ThetaPrime) => "theta-prime".into(),
            BoundId::Theta(ThetaVariant::Theta) => "theta".into(),
            BoundId::Theta(ThetaVariant::ThetaPlus) => "theta-plus".into(),
            BoundId::LasPrime(t) => format!("las-prime-{t}"),
            BoundId::LasPlain(t) => format!("las-plain-{t}"),
        }
    }

    /// Whether the bound is computed by an SDP and so holds only to solver
    /// tolerance.
    pub fn is_sdp(&self) -> bool {
        matches!(self, BoundId::Theta(_) | BoundId::LasPrime(_) | BoundId::LasPlain(_))
    }

    pub fn evaluate(&self, c: &PointConfiguration, cfg: &Config) -> Result<f64> {
        match self {
            BoundId::Pack => pack(c, &cfg.caps).map(|v| v as f64),
            BoundId::Cov => cov(c, &cfg.caps).map(|v| v as f64),
            _ => self.evaluate_graph(&c.conflict_graph(), cfg),
        }
    }

    /// Value on a conflict graph. `cov` needs geometry and is rejected.
    pub fn evaluate_graph(&self, g: &Graph, cfg: &Config) -> Result<f64> {
        match *self {
            BoundId::Pack => independence_number(g, &cfg.caps).map(|v| v as f64),
            BoundId::ChiCover => chromatic_number(&g.complement(), &cfg.caps).map(|v| v as f64),
            BoundId::Theta(v) => theta(g, v, cfg),
            BoundId::LasPrime(t) => las_prime(g, t, cfg).map(|s| s.value),
            BoundId::LasPlain(t) => las_plain(g, t, cfg).map(|s| s.value),
            BoundId::Cov => Err(Error::InvalidArgument("cov is defined on point sets only".into())),
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let level = |rest: &str| rest.parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad level in bound {s:?}")));
        Ok(match s {
            "pack" => BoundId::Pack,
            "cov" => BoundId::Cov,
            "chi-cover" => BoundId::ChiCover,
            "theta-prime" => BoundId::Theta(ThetaVariant::ThetaPrime),
            "theta" => BoundId::Theta(ThetaVariant::Theta),
            "theta-plus" => BoundId::Theta(ThetaVariant::ThetaPlus),
            _ => {
                if let Some(rest) = s.strip_prefix("las-prime-") {
                    BoundId::LasPrime(level(rest)?)
                } else if let Some(rest) = s.strip_prefix("las-plain-") {
                    BoundId::LasPlain(level(rest)?)
                } else {
                    return Err(Error::InvalidArgument(format!("unknown bound {s:?}")));
                }
            }
        })
    }
}
