//! `packbound sweep`: A(mesh(rIⁿ, h))/rⁿ over r and h lists.

use std::path::PathBuf;

use clap::Args;
use packbound_core::euclid::{delta_sweep, SweepRecord};
use packbound_core::{BoundId, Config};

use crate::failure::{Failure, CAP, SOLVER};

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub bound: BoundId,

    #[arg(long)]
    pub dim: usize,

    /// Cube side lengths, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub r: Vec<f64>,

    /// Mesh spacings, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub h: Vec<f64>,

    /// CSV file that rows are appended to; rows already present are reused.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Largest dimension a mesh sweep accepts.
const MAX_SWEEP_DIM: usize = 4;

pub fn run(args: &SweepArgs, cfg: &Config, workers: usize) -> Result<(SweepRecord, i32), Failure> {
    if args.dim == 0 || args.dim > MAX_SWEEP_DIM {
        return Err(Failure::usage(format!("--dim must lie in 1..={MAX_SWEEP_DIM}")));
    }
    if args.r.iter().chain(&args.h).any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Failure::usage("r and h must be positive"));
    }
    if let BoundId::LasPrime(t) | BoundId::LasPlain(t) = args.bound {
        if t == 0 || t > cfg.caps.lasserre_level {
            return Err(Failure::usage(format!("Lasserre level must lie in 1..={}", cfg.caps.lasserre_level)));
        }
    }
    let rec = delta_sweep(args.bound, args.dim, &args.r, &args.h, cfg, workers, args.out.as_deref())?;
    let code = if rec.rows.iter().any(|r| r.status == "solver_failure") {
        SOLVER
    } else if rec.rows.iter().any(|r| r.status == "cap_exceeded") {
        CAP
    } else if rec.all_ok() {
        0
    } else {
        crate::failure::PARSE
    };
    Ok((rec, code))
}

pub fn write_csv(rec: &SweepRecord, out: impl std::io::Write) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    for row in &rec.rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Failure::usage(e.to_string()))
}
