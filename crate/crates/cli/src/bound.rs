//! `packbound bound`: bounds on a graph or point file.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use packbound_core::lasserre::{las_plain, las_prime};
use packbound_core::theta::theta_primal;
use packbound_core::{BoundId, Config, Graph, PointConfiguration, ThetaVariant};
use serde::Serialize;

use crate::failure::{code_of, read_file, Failure};

#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["graph", "points"]))]
pub struct BoundArgs {
    /// Graph file: "n m" then m lines "i j" (0-based).
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,

    /// Point file: "d n" then n lines of d coordinates.
    #[arg(long, value_name = "PATH")]
    pub points: Option<PathBuf>,

    /// Every bound of the chain pack ≤ las′₁ ≤ ϑ′ ≤ ϑ ≤ ϑ⁺ ≤ χ-cover ≤ cov.
    #[arg(long)]
    pub all: bool,

    #[arg(long)]
    pub pack: bool,

    /// Needs --points.
    #[arg(long)]
    pub cov: bool,

    /// χ of the complement of the conflict graph.
    #[arg(long)]
    pub chi_cover: bool,

    #[arg(long)]
    pub theta_prime: bool,

    #[arg(long)]
    pub theta: bool,

    #[arg(long)]
    pub theta_plus: bool,

    /// Lasserre bound with nonnegative moments at level T.
    #[arg(long, value_name = "T")]
    pub las_prime: Option<usize>,

    /// Lasserre bound without the nonnegativity constraints at level T.
    #[arg(long, value_name = "T")]
    pub las_plain: Option<usize>,

    /// Further bounds by name (pack, cov, chi-cover, theta-prime, theta,
    /// theta-plus, las-prime-T, las-plain-T), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub bound: Vec<BoundId>,
}

/// One computed bound.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub variant: String,
    pub n: usize,
    pub value: Option<f64>,
    pub dual_value: Option<f64>,
    pub gap: Option<f64>,
    pub status: String,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundOutput {
    pub input: String,
    pub n: usize,
    pub edges: usize,
    pub results: Vec<ResultRecord>,
}

enum Input {
    Graph(Graph),
    Points(PointConfiguration),
}

impl BoundArgs {
    fn selection(&self) -> Result<Vec<BoundId>, Failure> {
        let mut out: Vec<BoundId> = Vec::new();
        if self.all {
            out.extend(BoundId::CHAIN);
        }
        let flags = [
            (self.pack, BoundId::Pack),
            (self.las_prime.is_some(), BoundId::LasPrime(self.las_prime.unwrap_or(1))),
            (self.las_plain.is_some(), BoundId::LasPlain(self.las_plain.unwrap_or(1))),
            (self.theta_prime, BoundId::Theta(ThetaVariant::ThetaPrime)),
            (self.theta, BoundId::Theta(ThetaVariant::Theta)),
            (self.theta_plus, BoundId::Theta(ThetaVariant::ThetaPlus)),
            (self.chi_cover, BoundId::ChiCover),
            (self.cov, BoundId::Cov),
        ];
        out.extend(flags.iter().filter(|(on, _)| *on).map(|(_, b)| *b));
        out.extend(&self.bound);
        let mut seen = Vec::new();
        out.retain(|b| {
            let fresh = !seen.contains(b);
            seen.push(*b);
            fresh
        });
        if out.is_empty() {
            return Err(Failure::usage("no bound selected; pass --all or a bound flag"));
        }
        Ok(out)
    }
}

fn validate(b: BoundId, input: &Input, cfg: &Config) -> Result<(), Failure> {
    match (b, input) {
        (BoundId::Cov, Input::Graph(_)) => Err(Failure::usage("cov needs --points")),
        (BoundId::LasPrime(t) | BoundId::LasPlain(t), _) if t == 0 || t > cfg.caps.lasserre_level => {
            Err(Failure::usage(format!("Lasserre level must lie in 1..={}", cfg.caps.lasserre_level)))
        }
        _ => Ok(()),
    }
}

/// Value and dual value of `b`; exact bounds report their value twice.
fn solve(b: BoundId, input: &Input, g: &Graph, cfg: &Config) -> packbound_core::Result<(f64, f64)> {
    match b {
        BoundId::Theta(v) => theta_primal(g, v, cfg).map(|s| (s.value, s.dual_value)),
        BoundId::LasPrime(t) => las_prime(g, t, cfg).map(|s| (s.value, s.bound.dual_value)),
        BoundId::LasPlain(t) => las_plain(g, t, cfg).map(|s| (s.value, s.bound.dual_value)),
        _ => match input {
            Input::Points(c) => b.evaluate(c, cfg),
            Input::Graph(g) => b.evaluate_graph(g, cfg),
        }
        .map(|v| (v, v)),
    }
}

/// Runs the command. Records are returned even when some bound failed,
/// together with the exit code of the first failure.
pub fn run(args: &BoundArgs, cfg: &Config) -> Result<(BoundOutput, i32), Failure> {
    let selection = args.selection()?;
    let (input, name) = match (&args.graph, &args.points) {
        (Some(p), _) => (Input::Graph(Graph::parse(&read_file(p)?)?), p.display().to_string()),
        (_, Some(p)) => {
            let c = PointConfiguration::parse(&read_file(p)?)?;
            let c = PointConfiguration::with_tolerance(c.dim(), c.points().to_vec(), cfg.tol.geom)?;
            (Input::Points(c), p.display().to_string())
        }
        _ => unreachable!("clap requires one input"),
    };
    for &b in &selection {
        validate(b, &input, cfg)?;
    }
    let g = match &input {
        Input::Graph(g) => g.clone(),
        Input::Points(c) => c.conflict_graph(),
    };
    let mut code = 0;
    let results = selection
        .iter()
        .map(|&b| {
            let start = Instant::now();
            let r = solve(b, &input, &g, cfg);
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            match r {
                Ok((value, dual)) => ResultRecord {
                    variant: b.name(),
                    n: g.n(),
                    value: Some(value),
                    dual_value: Some(dual),
                    gap: Some((value - dual).abs()),
                    status: "ok".into(),
                    wall_ms,
                },
                Err(e) => {
                    if code == 0 {
                        code = code_of(&e);
                    }
                    ResultRecord {
                        variant: b.name(),
                        n: g.n(),
                        value: None,
                        dual_value: None,
                        gap: None,
                        status: e.to_string(),
                        wall_ms,
                    }
                }
            }
        })
        .collect();
    Ok((
        BoundOutput {
            input: name,
            n: g.n(),
            edges: g.edge_count(),
            results,
        },
        code,
    ))
}
