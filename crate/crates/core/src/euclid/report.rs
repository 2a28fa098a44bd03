//! All implemented bounds on one configuration, checked against the chain
//! pack ≤ las′_t ≤ ϑ′ ≤ ϑ ≤ ϑ⁺ ≤ χ-cover ≤ cov.

use serde::{Deserialize, Serialize};

use crate::bounds::BoundId;
use crate::config::Config;
use crate::error::Result;
use crate::geometry::{cube_mesh, PointConfiguration};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichRow {
    pub bound: String,
    /// None when the bound is outside its caps or the solver failed.
    pub value: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub points: usize,
    pub rows: Vec<SandwichRow>,
    /// Consecutive computable pairs that break the chain.
    pub violations: Vec<String>,
    pub chain_ok: bool,
}

pub const CHAIN_SLACK: f64 = 1e-5;

/// Evaluates the chain with las′ at level `t`.
pub fn sandwich_report(c: &PointConfiguration, t: usize, cfg: &Config) -> SandwichReport {
    let mut chain = BoundId::CHAIN;
    chain[1] = BoundId::LasPrime(t);
    let rows: Vec<SandwichRow> = chain
        .iter()
        .map(|b| match b.evaluate(c, cfg) {
            Ok(v) => SandwichRow {
                bound: b.name(),
                value: Some(v),
                status: "ok".into(),
            },
            Err(e) => SandwichRow {
                bound: b.name(),
                value: None,
                status: e.to_string(),
            },
        })
        .collect();
    let known: Vec<(&str, f64)> = rows.iter().filter_map(|r| r.value.map(|v| (r.bound.as_str(), v))).collect();
    let violations: Vec<String> = known
        .windows(2)
        .filter(|w| w[0].1 > w[1].1 + CHAIN_SLACK)
        .map(|w| format!("{} = {} > {} = {}", w[0].0, w[0].1, w[1].0, w[1].1))
        .collect();
    SandwichReport {
        points: c.len(),
        chain_ok: violations.is_empty(),
        rows,
        violations,
    }
}

/// The chain on cube_mesh(n, r, h).
pub fn sandwich_consistency_report(n: usize, r: f64, h: f64, t: usize, cfg: &Config) -> Result<SandwichReport> {
    Ok(sandwich_report(&cube_mesh(n, r, h)?, t, cfg))
}
