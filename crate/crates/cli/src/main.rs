//! `packbound`: bounds, axiom suites, scaling sweeps and LP certificates.
//!
//! Exit codes: 0 success, 1 axiom failure, 2 parse or usage error,
//! 3 size cap exceeded, 4 solver failure, 5 infeasible certificate.
//! Results go to stdout as JSON (CSV for `sweep`); diagnostics go to stderr.

mod axioms;
mod bound;
mod certify;
mod failure;
mod settings;
mod sweep;

use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;

use failure::Failure;
use settings::Global;

#[derive(Debug, Parser)]
#[command(name = "packbound", version, about = "Packing bound functions on point sets and graphs")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Compute bounds on a graph or point configuration (JSON).
    Bound(bound::BoundArgs),
    /// Run the randomized axiom suite against selected bounds (JSON).
    Axioms(axioms::AxiomsArgs),
    /// Evaluate a bound on cube meshes over r and h lists (CSV).
    Sweep(sweep::SweepArgs),
    /// Check a radial profile as a linear-programming-bound certificate (JSON).
    Certify(certify::CertifyArgs),
}

fn print_json(v: &impl Serialize) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out).map_err(|e| Failure::usage(e.to_string()))
}

fn run() -> Result<i32, Failure> {
    let cmd = Cli::command();
    let argv = settings::merge_config(&cmd, std::env::args_os().collect())?;
    let matches = match cmd.try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return Ok(if e.use_stderr() { failure::PARSE } else { 0 });
        }
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| Failure::usage(e.to_string()))?;
    let cfg = cli.global.config()?;
    match &cli.command {
        Cmd::Bound(a) => {
            let (out, code) = bound::run(a, &cfg)?;
            print_json(&out)?;
            Ok(code)
        }
        Cmd::Axioms(a) => {
            let (report, code) = axioms::run(a, &cfg, cli.global.workers()?)?;
            print_json(&report)?;
            Ok(code)
        }
        Cmd::Sweep(a) => {
            let (rec, code) = sweep::run(a, &cfg, cli.global.workers()?)?;
            sweep::write_csv(&rec, std::io::stdout().lock())?;
            Ok(code)
        }
        Cmd::Certify(a) => {
            let (report, code) = certify::run(a)?;
            print_json(&report)?;
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("packbound: {f}");
            ExitCode::from(f.code as u8)
        }
    }
}
