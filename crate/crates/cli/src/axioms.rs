//! `packbound axioms`: randomized axiom cases against selected bounds.

use clap::Args;
use packbound_core::geometry::axioms::{case_digest, check_case, generate_cases, Axiom};
use packbound_core::geometry::PointConfiguration;
use packbound_core::{pack, BoundId, Config};
use rayon::prelude::*;
use serde::Serialize;

use crate::failure::{Failure, AXIOM_FAILURE};

#[derive(Debug, Clone, Args)]
pub struct AxiomsArgs {
    /// Bounds to test, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "pack,cov,theta-prime")]
    pub bounds: Vec<BoundId>,

    /// Cases per axiom.
    #[arg(long, default_value_t = 200)]
    pub cases: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Adds a bound that reports pack + 1, which breaks the sphere bound.
    #[arg(long, hide = true)]
    pub inject_faulty: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomTally {
    pub bound: String,
    pub axiom: String,
    pub passed: usize,
    pub failed: usize,
    /// First few failing cases as "lhs vs rhs" or the error text.
    pub examples: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomsReport {
    pub seed: u64,
    pub cases_per_axiom: usize,
    /// SHA-256 of each axiom's case list, in axiom order.
    pub case_digests: Vec<String>,
    pub results: Vec<AxiomTally>,
    pub all_passed: bool,
}

enum Tested {
    Real(BoundId),
    Faulty,
}

impl Tested {
    fn name(&self) -> String {
        match self {
            Tested::Real(b) => b.name(),
            Tested::Faulty => "faulty".into(),
        }
    }

    fn eval(&self, c: &PointConfiguration, cfg: &Config) -> packbound_core::Result<f64> {
        match self {
            Tested::Real(b) => b.evaluate(c, cfg),
            Tested::Faulty => pack(c, &cfg.caps).map(|v| v as f64 + 1.0),
        }
    }

    /// SDP values hold only to solver accuracy; the others are exact.
    fn tol(&self, cfg: &Config) -> f64 {
        match self {
            Tested::Real(b) if b.is_sdp() => cfg.tol.bound,
            _ => 0.0,
        }
    }
}

const EXAMPLES: usize = 3;

pub fn run(args: &AxiomsArgs, cfg: &Config, workers: usize) -> Result<(AxiomsReport, i32), Failure> {
    if args.cases == 0 {
        return Err(Failure::usage("--cases must be positive"));
    }
    let mut tested: Vec<Tested> = args.bounds.iter().map(|&b| Tested::Real(b)).collect();
    if args.inject_faulty {
        tested.push(Tested::Faulty);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::usage(e.to_string()))?;
    let mut digests = Vec::new();
    let mut results = Vec::new();
    for axiom in Axiom::ALL {
        let cases = generate_cases(axiom, args.cases, args.seed);
        digests.push(case_digest(&cases));
        for t in &tested {
            let outcomes: Vec<Result<(), String>> = pool.install(|| {
                cases
                    .par_iter()
                    .map(|case| match check_case(case, &|c| t.eval(c, cfg), t.tol(cfg)) {
                        Ok(o) if o.passed => Ok(()),
                        Ok(o) => Err(format!("{} vs {}", o.lhs, o.rhs)),
                        Err(e) => Err(e.to_string()),
                    })
                    .collect()
            });
            let failures: Vec<String> = outcomes.into_iter().filter_map(|o| o.err()).collect();
            results.push(AxiomTally {
                bound: t.name(),
                axiom: axiom.name().into(),
                passed: cases.len() - failures.len(),
                failed: failures.len(),
                examples: failures.into_iter().take(EXAMPLES).collect(),
            });
        }
    }
    let all_passed = results.iter().all(|r| r.failed == 0);
    let report = AxiomsReport {
        seed: args.seed,
        cases_per_axiom: args.cases,
        case_digests: digests,
        results,
        all_passed,
    };
    Ok((report, if all_passed { 0 } else { AXIOM_FAILURE }))
}
