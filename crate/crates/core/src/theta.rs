//! The ϑ, ϑ′ and ϑ⁺ programs on conflict graphs, in primal and dual form.
//!
//! For a conflict graph G with edge set E:
//!
//! * primal: maximize ⟨J, M⟩ over M ⪰ 0 with tr M = 1 and
//!   - ϑ⁺: M_ij ≤ 0 on E,
//!   - ϑ: M_ij = 0 on E,
//!   - ϑ′: M_ij = 0 on E and M ≥ 0 entrywise;
//! * dual: minimize t over K ⪰ 0 with K_xx = t − 1 and, on non-edges,
//!   - ϑ: K_xy = −1,
//!   - ϑ′: K_xy ≤ −1,
//!   - ϑ⁺: K_xy = −1, and additionally K_xy ≥ −1 on E.
//!
//! With this orientation α(G) ≤ ϑ′(G) ≤ ϑ(G) ≤ ϑ⁺(G) ≤ χ(Ḡ).

use std::collections::{BTreeSet, HashMap};
use std::sync::RwLock;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{check_cap, Error, Result};
use crate::geometry::PointConfiguration;
use crate::graph::Graph;
use crate::linalg::Mat;
use crate::sdp::{self, BlockSpec, BlockValue, CertificateReport, Entry, SdpProblem, SdpSolution, SolveStatus, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaVariant {
    ThetaPlus,
    Theta,
    ThetaPrime,
}

impl ThetaVariant {
    pub const ALL: [ThetaVariant; 3] = [ThetaVariant::ThetaPrime, ThetaVariant::Theta, ThetaVariant::ThetaPlus];

    pub fn name(&self) -> &'static str {
        match self {
            ThetaVariant::ThetaPlus => "theta_plus",
            ThetaVariant::Theta => "theta",
            ThetaVariant::ThetaPrime => "theta_prime",
        }
    }
}

/// Solver options derived from the shared tolerances.
pub fn solver_options(cfg: &Config) -> SolverOptions {
    SolverOptions {
        gap_tol: cfg.tol.gap,
        residual_tol: cfg.tol.residual,
        max_order: cfg.caps.sdp_order,
        max_constraints: cfg.caps.sdp_constraints,
        ..SolverOptions::default()
    }
}

/// An SDP-backed bound together with the data needed to re-check it.
#[derive(Debug, Clone)]
pub struct BoundSolve {
    pub value: f64,
    /// The bound implied by the solver's dual iterate for the same program.
    pub dual_value: f64,
    pub status: SolveStatus,
    pub problem: SdpProblem,
    pub solution: SdpSolution,
    pub wall_ms: f64,
}

impl BoundSolve {
    pub fn certify(&self, cfg: &Config) -> CertificateReport {
        sdp::certify(&self.solution, &self.problem, &cfg.tol)
    }

    pub fn gap(&self) -> f64 {
        (self.value - self.dual_value).abs()
    }
}

pub(crate) fn run(problem: SdpProblem, cfg: &Config, start: Instant) -> Result<(SdpSolution, SdpProblem, f64)> {
    let sol = sdp::solve(&problem, &solver_options(cfg))?;
    if sol.status != SolveStatus::Optimal {
        return Err(Error::Solver(sol.status));
    }
    Ok((sol, problem, start.elapsed().as_secs_f64() * 1e3))
}

/// Primal program with nonnegativity imposed on the listed non-edge pairs.
fn primal_problem(g: &Graph, v: ThetaVariant, nonneg: &[(usize, usize)]) -> SdpProblem {
    let n = g.n();
    let slack = match v {
        ThetaVariant::ThetaPlus => g.edge_count(),
        ThetaVariant::Theta => 0,
        ThetaVariant::ThetaPrime => nonneg.len(),
    };
    let mut blocks = vec![BlockSpec::Psd(n)];
    if slack > 0 {
        blocks.push(BlockSpec::Diagonal(slack));
    }
    let mut p = SdpProblem::new(blocks);
    for i in 0..n {
        for j in i..n {
            p.add_objective(0, i, j, -1.0);
        }
    }
    p.add_constraint((0..n).map(|i| Entry::new(0, i, i, 1.0)).collect(), 1.0);
    for (k, &(i, j)) in g.edges().iter().enumerate() {
        let mut e = vec![Entry::new(0, i, j, 0.5)];
        if v == ThetaVariant::ThetaPlus {
            e.push(Entry::new(1, k, k, 1.0));
        }
        p.add_constraint(e, 0.0);
    }
    if v == ThetaVariant::ThetaPrime {
        for (k, &(i, j)) in nonneg.iter().enumerate() {
            p.add_constraint(vec![Entry::new(0, i, j, 0.5), Entry::new(1, k, k, -1.0)], 0.0);
        }
    }
    p
}

/// Kernel program with the free t eliminated: K_xx = K_00 and
/// t = K_00 + 1.
fn dual_problem(g: &Graph, v: ThetaVariant) -> SdpProblem {
    let n = g.n();
    let non_edges = g.non_edges();
    let slack = match v {
        ThetaVariant::Theta => 0,
        ThetaVariant::ThetaPrime => non_edges.len(),
        ThetaVariant::ThetaPlus => g.edge_count(),
    };
    let mut blocks = vec![BlockSpec::Psd(n)];
    if slack > 0 {
        blocks.push(BlockSpec::Diagonal(slack));
    }
    let mut p = SdpProblem::new(blocks);
    p.add_objective(0, 0, 0, 1.0);
    for x in 1..n {
        p.add_constraint(vec![Entry::new(0, x, x, 1.0), Entry::new(0, 0, 0, -1.0)], 0.0);
    }
    for (k, &(i, j)) in non_edges.iter().enumerate() {
        let mut e = vec![Entry::new(0, i, j, 0.5)];
        if v == ThetaVariant::ThetaPrime {
            e.push(Entry::new(1, k, k, 1.0));
        }
        p.add_constraint(e, -1.0);
    }
    if v == ThetaVariant::ThetaPlus {
        for (k, &(i, j)) in g.edges().iter().enumerate() {
            p.add_constraint(vec![Entry::new(0, i, j, 0.5), Entry::new(1, k, k, -1.0)], -1.0);
        }
    }
    p
}

fn check_theta_cap(g: &Graph, v: ThetaVariant, cfg: &Config) -> Result<()> {
    match v {
        ThetaVariant::ThetaPrime => check_cap("theta-prime vertex count", g.n(), cfg.caps.theta_prime),
        _ => check_cap("theta vertex count", g.n(), cfg.caps.theta),
    }
}

pub(crate) fn trivial(value: f64) -> BoundSolve {
    let problem = SdpProblem::new(vec![]);
    let solution = sdp::solve(&problem, &SolverOptions::default()).expect("empty problem");
    BoundSolve {
        value,
        dual_value: value,
        status: SolveStatus::Optimal,
        problem,
        solution,
        wall_ms: 0.0,
    }
}

/// Above this many non-edges ϑ′ is solved by constraint generation on the
/// entrywise sign constraints.
const FULL_THETA_PRIME_PAIRS: usize = 600;

/// Primal value of the chosen variant.
pub fn theta_primal(g: &Graph, v: ThetaVariant, cfg: &Config) -> Result<BoundSolve> {
    check_theta_cap(g, v, cfg)?;
    if g.n() == 0 {
        return Ok(trivial(0.0));
    }
    let start = Instant::now();
    if v == ThetaVariant::ThetaPrime {
        let non_edges = g.non_edges();
        if non_edges.len() > FULL_THETA_PRIME_PAIRS {
            return theta_prime_active_set(g, &non_edges, cfg, start);
        }
        let (sol, problem, ms) = run(primal_problem(g, v, &non_edges), cfg, start)?;
        return Ok(from_primal(sol, problem, ms));
    }
    let (sol, problem, ms) = run(primal_problem(g, v, &[]), cfg, start)?;
    Ok(from_primal(sol, problem, ms))
}

fn from_primal(sol: SdpSolution, problem: SdpProblem, wall_ms: f64) -> BoundSolve {
    BoundSolve {
        value: -sol.primal_objective,
        dual_value: -sol.dual_objective,
        status: sol.status,
        problem,
        solution: sol,
        wall_ms,
    }
}

/// Solves the ϑ′ program with sign constraints only on pairs that the
/// previous round's optimum violated. The final optimum satisfies every
/// sign constraint, so it is optimal for the full program.
fn theta_prime_active_set(g: &Graph, non_edges: &[(usize, usize)], cfg: &Config, start: Instant) -> Result<BoundSolve> {
    let mut active: BTreeSet<(usize, usize)> = BTreeSet::new();
    for _round in 0..50 {
        let list: Vec<_> = active.iter().copied().collect();
        let (sol, problem, ms) = run(primal_problem(g, ThetaVariant::ThetaPrime, &list), cfg, start)?;
        let m = sol.x.dense_block(0).expect("psd block");
        let floor = -1e-9 * (1.0 + m.max_abs());
        let violated: Vec<_> = non_edges
            .iter()
            .copied()
            .filter(|&(i, j)| m[(i, j)] < floor && !active.contains(&(i, j)))
            .collect();
        if violated.is_empty() {
            return Ok(from_primal(sol, problem, ms));
        }
        active.extend(violated);
    }
    Err(Error::Solver(SolveStatus::IterationLimit))
}

/// Dual (kernel) value of the chosen variant, solved as its own program.
pub fn theta_dual(g: &Graph, v: ThetaVariant, cfg: &Config) -> Result<BoundSolve> {
    check_theta_cap(g, v, cfg)?;
    if g.n() == 0 {
        return Ok(trivial(0.0));
    }
    let start = Instant::now();
    let (sol, problem, ms) = run(dual_problem(g, v), cfg, start)?;
    Ok(BoundSolve {
        value: sol.primal_objective + 1.0,
        dual_value: sol.dual_objective + 1.0,
        status: sol.status,
        problem,
        solution: sol,
        wall_ms: ms,
    })
}

/// The kernel K of a dual solve.
pub fn dual_kernel(s: &BoundSolve) -> Mat {
    match &s.solution.x.blocks.first() {
        Some(BlockValue::Dense(k)) => k.clone(),
        _ => Mat::zeros(0),
    }
}

/// Convenience wrapper returning only the primal value.
pub fn theta(g: &Graph, v: ThetaVariant, cfg: &Config) -> Result<f64> {
    theta_primal(g, v, cfg).map(|s| s.value)
}

/// Checks that K is a dual-feasible kernel for `g` and returns its t.
pub fn check_dual_kernel(g: &Graph, k: &Mat, v: ThetaVariant, tol: f64) -> Result<f64> {
    let n = g.n();
    if k.order() != n {
        return Err(Error::InfeasibleInput(format!("kernel order {} for {} vertices", k.order(), n)));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let t = k[(0, 0)] + 1.0;
    for x in 0..n {
        if (k[(x, x)] + 1.0 - t).abs() > tol {
            return Err(Error::InfeasibleInput(format!("diagonal entry {x} differs from t − 1")));
        }
        for y in (x + 1)..n {
            if (k[(x, y)] - k[(y, x)]).abs() > tol {
                return Err(Error::InfeasibleInput("kernel is not symmetric".into()));
            }
            let kxy = k[(x, y)];
            let ok = if g.has_edge(x, y) {
                v != ThetaVariant::ThetaPlus || kxy >= -1.0 - tol
            } else {
                match v {
                    ThetaVariant::ThetaPrime => kxy <= -1.0 + tol,
                    _ => (kxy + 1.0).abs() <= tol,
                }
            };
            if !ok {
                return Err(Error::InfeasibleInput(format!("entry ({x}, {y}) = {kxy} violates the sign pattern")));
            }
        }
    }
    let lmin = k.min_eigenvalue();
    if lmin < -tol {
        return Err(Error::NotPsd { min_eigenvalue: lmin });
    }
    Ok(t)
}

/// Builds a dual-feasible kernel for the disjoint union of `g` and `h`
/// from dual-feasible kernels of each:
/// K = (α²+1)K_G ⊕ (α⁻²+1)K_H + L_α with α² = t_H / t_G and
/// L_α = α²·1_GG + α⁻²·1_HH − 1_GH − 1_HG. Its diagonal is t_G + t_H − 1,
/// so ϑ is additive over disjoint unions of conflict graphs.
pub fn join_additivity_witness(g: &Graph, kg: &Mat, h: &Graph, kh: &Mat, v: ThetaVariant) -> Result<Mat> {
    let tol = 1e-6;
    let tg = check_dual_kernel(g, kg, v, tol)?;
    let th = check_dual_kernel(h, kh, v, tol)?;
    let (ng, nh) = (g.n(), h.n());
    if ng == 0 {
        return Ok(kh.clone());
    }
    if nh == 0 {
        return Ok(kg.clone());
    }
    let a2 = th / tg;
    let ia2 = 1.0 / a2;
    Ok(Mat::from_fn(ng + nh, |i, j| match (i < ng, j < ng) {
        (true, true) => (a2 + 1.0) * kg[(i, j)] + a2,
        (false, false) => (ia2 + 1.0) * kh[(i - ng, j - ng)] + ia2,
        _ => -1.0,
    }))
}

/// Cache of bound values keyed by conflict-graph structure.
#[derive(Debug, Default)]
pub struct ThetaCache {
    map: RwLock<HashMap<(String, ThetaVariant), f64>>,
}

impl ThetaCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(&self, g: &Graph, v: ThetaVariant, cfg: &Config) -> Result<f64> {
        let key = (g.structure_hash(), v);
        if let Some(&val) = self.map.read().expect("cache lock").get(&key) {
            return Ok(val);
        }
        let val = theta(g, v, cfg)?;
        self.map.write().expect("cache lock").insert(key, val);
        Ok(val)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// ϑ-family bound of a point configuration: the program on its conflict
/// graph, with constraints acting on pairs at distance below 2.
pub fn theta_bound_on_points(c: &PointConfiguration, v: ThetaVariant, cfg: &Config) -> Result<f64> {
    theta(&c.conflict_graph(), v, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{chromatic_number, independence_number};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn named_values() {
        let sqrt5 = 5f64.sqrt();
        for v in ThetaVariant::ALL {
            for n in 1..6 {
                assert!((theta(&Graph::complete(n), v, &cfg()).unwrap() - 1.0).abs() < 1e-6);
                assert!((theta(&Graph::empty(n), v, &cfg()).unwrap() - n as f64).abs() < 1e-6);
            }
            let c5 = theta_primal(&Graph::cycle(5), v, &cfg()).unwrap();
            assert!((c5.value - sqrt5).abs() < 1e-6, "{v:?} {}", c5.value);
            assert!(c5.certify(&cfg()).passed());
            let d = theta_dual(&Graph::cycle(5), v, &cfg()).unwrap();
            assert!((d.value - sqrt5).abs() < 1e-6, "{v:?} {}", d.value);
        }
        let k = dual_kernel(&theta_dual(&Graph::complete(4), ThetaVariant::Theta, &cfg()).unwrap());
        assert!(k.max_abs() < 1e-6);
        let d = theta_dual(&Graph::empty(2), ThetaVariant::Theta, &cfg()).unwrap();
        assert!((d.value - 2.0).abs() < 1e-7);
        assert!(theta_primal(&Graph::empty(2), ThetaVariant::Theta, &Config {
            caps: crate::config::Caps { theta: 1, ..Default::default() },
            ..cfg()
        })
        .is_err());
    }

    #[test]
    fn variants_separate_on_known_graph() {
        // Cycle C7 conflict graph: ϑ(C7) ≈ 3.3177, and the variants stay ordered.
        let g = Graph::cycle(7);
        let vals: Vec<f64> = ThetaVariant::ALL.iter().map(|&v| theta(&g, v, &cfg()).unwrap()).collect();
        assert!((vals[1] - 3.317_667_009_7).abs() < 1e-6, "{vals:?}");
        assert!(vals[0] <= vals[1] + 1e-6 && vals[1] <= vals[2] + 1e-6);
    }

    #[test]
    fn witness_for_single_vertices() {
        let k1 = Graph::complete(1);
        let z = Mat::zeros(1);
        let k = join_additivity_witness(&k1, &z, &k1, &z, ThetaVariant::Theta).unwrap();
        assert_eq!(k, Mat::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]));
        let bad = Mat::from_rows(&[vec![-1.0]]);
        assert!(join_additivity_witness(&k1, &bad, &k1, &z, ThetaVariant::Theta).is_err());
    }

    #[test]
    fn sandwich_and_duality_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for k in 0..8 {
            let g = Graph::random(4 + k, 0.5, &mut rng);
            let a = independence_number(&g, &cfg().caps).unwrap() as f64;
            let chi = chromatic_number(&g.complement(), &cfg().caps).unwrap() as f64;
            let vals: Vec<f64> = ThetaVariant::ALL.iter().map(|&v| theta(&g, v, &cfg()).unwrap()).collect();
            assert!(a <= vals[0] + 1e-6 && vals[0] <= vals[1] + 1e-6 && vals[1] <= vals[2] + 1e-6 && vals[2] <= chi + 1e-6);
            for (i, &v) in ThetaVariant::ALL.iter().enumerate() {
                let d = theta_dual(&g, v, &cfg()).unwrap().value;
                assert!((d - vals[i]).abs() < 1e-6, "{v:?}: {d} vs {}", vals[i]);
            }
        }
    }

    #[test]
    fn active_set_matches_full_program() {
        let g = Graph::path(37);
        assert!(g.non_edges().len() > FULL_THETA_PRIME_PAIRS);
        let active = theta_primal(&g, ThetaVariant::ThetaPrime, &cfg()).unwrap();
        let full = run(primal_problem(&g, ThetaVariant::ThetaPrime, &g.non_edges()), &cfg(), Instant::now()).unwrap();
        assert!((active.value + full.0.primal_objective).abs() < 1e-6);
        assert!((active.value - 19.0).abs() < 1e-6);
    }

    #[test]
    fn cache_hits_on_isomorphic_labelling() {
        let cache = ThetaCache::new();
        let a = cache.get_or_compute(&Graph::cycle(5), ThetaVariant::Theta, &cfg()).unwrap();
        let b = cache
            .get_or_compute(&Graph::new(5, &[(1, 0), (1, 2), (3, 2), (4, 3), (0, 4)]).unwrap(), ThetaVariant::Theta, &cfg())
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1);
    }
}
