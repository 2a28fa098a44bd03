//! Moment programs of the Lasserre hierarchy and their kernel duals.
//!
//! * las′_t: maximize λ(I_{=1}) over λ on I_2t with λ(∅) = 1, λ ≥ 0 and
//!   A_t* λ ⪰ 0 (las_t drops λ ≥ 0).
//! * dual: minimize K(∅, ∅) over K ⪰ 0 on I_t with A_t K({x}) ≤ −1 and
//!   A_t K(S) ≤ 0 for |S| ≥ 2 (equalities for las_t).
//!
//! The moment programs are posed with λ as the solver's dual vector, so
//! the slack matrix is A_t* λ itself (plus diag(λ) for λ ≥ 0).

use std::collections::HashMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::family::{enumerate_independent_sets, sorted_union, IndependentSetFamily, MomentVector};
use super::operator::{at_operator, union_table};
use crate::config::Config;
use crate::error::{check_cap, Error, Result};
use crate::geometry::PointConfiguration;
use crate::graph::Graph;
use crate::linalg::Mat;
use crate::sdp::{BlockSpec, Entry, SdpProblem, SolveStatus};
use crate::theta::{run, trivial, BoundSolve};

/// A solved moment or kernel program with its families and moment vector.
#[derive(Debug, Clone)]
pub struct LasSolve {
    pub value: f64,
    pub bound: BoundSolve,
    pub family_t: IndependentSetFamily,
    pub moments: MomentVector,
    /// Smallest eigenvalue of (A_t^{≠∅})*μ − μ⊗μ, set by the Schur form.
    pub schur_min_eigenvalue: Option<f64>,
}

impl LasSolve {
    pub fn t(&self) -> usize {
        self.family_t.t()
    }

    /// Kernel K of a dual solve.
    pub fn kernel(&self) -> Option<&Mat> {
        self.bound.solution.x.dense_block(0)
    }
}

fn families(g: &Graph, t: usize, cfg: &Config) -> Result<(IndependentSetFamily, IndependentSetFamily)> {
    if t == 0 {
        return Err(Error::InvalidArgument("Lasserre level must be at least 1".into()));
    }
    check_cap("Lasserre level", t, cfg.caps.lasserre_level)?;
    let cap = cfg.caps.enumeration.min(cfg.caps.lasserre_family);
    let f2t = enumerate_independent_sets(g, 2 * t, cap)?;
    let ft = enumerate_independent_sets(g, t, cap)?;
    Ok((ft, f2t))
}

fn degenerate(ft: IndependentSetFamily, f2t: IndependentSetFamily) -> LasSolve {
    LasSolve {
        value: 0.0,
        bound: trivial(0.0),
        family_t: ft,
        moments: MomentVector {
            family: f2t,
            values: vec![1.0],
        },
        schur_min_eigenvalue: None,
    }
}

fn singleton_rhs(f2t: &IndependentSetFamily, s: usize) -> f64 {
    if f2t.sets()[s].len() == 1 {
        1.0
    } else {
        0.0
    }
}

fn moment_problem(ft: &IndependentSetFamily, f2t: &IndependentSetFamily, positive: bool) -> SdpProblem {
    let m = ft.len();
    let k = f2t.len() - 1;
    let mut blocks = vec![BlockSpec::Psd(m)];
    if positive {
        blocks.push(BlockSpec::Diagonal(k));
    }
    let mut p = SdpProblem::new(blocks);
    p.add_objective(0, 0, 0, 1.0);
    let table = union_table(ft, f2t);
    let mut rows: Vec<Vec<Entry>> = vec![Vec::new(); k];
    for a in 0..m {
        for b in a..m {
            if let Some(s) = table[a * m + b] {
                if s > 0 {
                    rows[s - 1].push(Entry::new(0, a, b, -1.0));
                }
            }
        }
    }
    for (i, mut entries) in rows.into_iter().enumerate() {
        if positive {
            entries.push(Entry::new(1, i, i, -1.0));
        }
        p.add_constraint(entries, singleton_rhs(f2t, i + 1));
    }
    p
}

fn solve_moments(g: &Graph, t: usize, positive: bool, cfg: &Config) -> Result<LasSolve> {
    let (ft, f2t) = families(g, t, cfg)?;
    if f2t.len() == 1 {
        return Ok(degenerate(ft, f2t));
    }
    let start = Instant::now();
    let (sol, problem, ms) = run(moment_problem(&ft, &f2t, positive), cfg, start)?;
    let mut values = vec![1.0];
    values.extend_from_slice(&sol.y);
    let bound = BoundSolve {
        value: sol.dual_objective,
        dual_value: sol.primal_objective,
        status: sol.status,
        problem,
        solution: sol,
        wall_ms: ms,
    };
    Ok(LasSolve {
        value: bound.value,
        bound,
        family_t: ft,
        moments: MomentVector { family: f2t, values },
        schur_min_eigenvalue: None,
    })
}

/// las′_t(G).
pub fn las_prime(g: &Graph, t: usize, cfg: &Config) -> Result<LasSolve> {
    solve_moments(g, t, true, cfg)
}

/// las_t(G), without λ ≥ 0.
pub fn las_plain(g: &Graph, t: usize, cfg: &Config) -> Result<LasSolve> {
    solve_moments(g, t, false, cfg)
}

/// las′_t through its Schur-complement form: μ ≥ 0 on I_2t ∖ {∅} with
/// (A_t^{≠∅})*μ − μ⊗μ ⪰ 0, solved as the bordered matrix
/// [[1, μᵀ], [μ, (A_t^{≠∅})*μ]] ⪰ 0.
pub fn las_prime_schur(g: &Graph, t: usize, cfg: &Config) -> Result<LasSolve> {
    let (ft, f2t) = families(g, t, cfg)?;
    if f2t.len() == 1 {
        return Ok(degenerate(ft, f2t));
    }
    let start = Instant::now();
    // Inner index set I_t ∖ {∅}; bordered row/column 0.
    let inner: Vec<&Vec<usize>> = ft.sets()[1..].iter().collect();
    let q = inner.len();
    let k = f2t.len() - 1;
    let mut p = SdpProblem::new(vec![BlockSpec::Psd(q + 1), BlockSpec::Diagonal(k)]);
    p.add_objective(0, 0, 0, 1.0);
    let mut rows: Vec<Vec<Entry>> = vec![Vec::new(); k];
    for (a, ja) in inner.iter().enumerate() {
        let s = f2t.position(ja).expect("I_t ⊆ I_2t");
        rows[s - 1].push(Entry::new(0, 0, a + 1, -1.0));
        for (b, jb) in inner.iter().enumerate().skip(a) {
            if let Some(s) = f2t.position(&sorted_union(ja, jb)) {
                rows[s - 1].push(Entry::new(0, a + 1, b + 1, -1.0));
            }
        }
    }
    for (i, mut entries) in rows.into_iter().enumerate() {
        entries.push(Entry::new(1, i, i, -1.0));
        p.add_constraint(entries, singleton_rhs(&f2t, i + 1));
    }
    let (sol, problem, ms) = run(p, cfg, start)?;
    let mu = &sol.y;
    let border: Vec<f64> = inner.iter().map(|j| mu[f2t.position(j).expect("listed") - 1]).collect();
    let schur = Mat::from_fn(q, |a, b| {
        let m = f2t.position(&sorted_union(inner[a], inner[b])).map_or(0.0, |s| mu[s - 1]);
        m - border[a] * border[b]
    });
    let schur_min = if q == 0 { 0.0 } else { schur.min_eigenvalue() };
    let mut values = vec![1.0];
    values.extend_from_slice(mu);
    let bound = BoundSolve {
        value: sol.dual_objective,
        dual_value: sol.primal_objective,
        status: sol.status,
        problem,
        solution: sol,
        wall_ms: ms,
    };
    Ok(LasSolve {
        value: bound.value,
        bound,
        family_t: ft,
        moments: MomentVector { family: f2t, values },
        schur_min_eigenvalue: Some(schur_min),
    })
}

/// Kernel program assembled term by term over ordered pairs (J, J′).
fn kernel_problem(ft: &IndependentSetFamily, f2t: &IndependentSetFamily, positive: bool) -> SdpProblem {
    let m = ft.len();
    let k = f2t.len() - 1;
    let mut blocks = vec![BlockSpec::Psd(m)];
    if positive {
        blocks.push(BlockSpec::Diagonal(k));
    }
    let mut p = SdpProblem::new(blocks);
    p.add_objective(0, 0, 0, 1.0);
    let mut coeffs: Vec<HashMap<(usize, usize), f64>> = vec![HashMap::new(); k];
    for (a, ja) in ft.sets().iter().enumerate() {
        for (b, jb) in ft.sets().iter().enumerate() {
            let Some(s) = f2t.position(&sorted_union(ja, jb)) else { continue };
            if s == 0 {
                continue;
            }
            // An off-diagonal entry with value v contributes 2v·K_ab.
            let w = if a == b { 1.0 } else { 0.5 };
            *coeffs[s - 1].entry((a.min(b), a.max(b))).or_insert(0.0) += w;
        }
    }
    for (i, c) in coeffs.into_iter().enumerate() {
        let mut entries: Vec<Entry> = c.into_iter().map(|((a, b), v)| Entry::new(0, a, b, v)).collect();
        entries.sort_by_key(|e| (e.row, e.col));
        if positive {
            entries.push(Entry::new(1, i, i, 1.0));
        }
        p.add_constraint(entries, -singleton_rhs(f2t, i + 1));
    }
    p
}

fn solve_kernel(g: &Graph, t: usize, positive: bool, cfg: &Config) -> Result<LasSolve> {
    let (ft, f2t) = families(g, t, cfg)?;
    if f2t.len() == 1 {
        return Ok(degenerate(ft, f2t));
    }
    let start = Instant::now();
    let (sol, problem, ms) = run(kernel_problem(&ft, &f2t, positive), cfg, start)?;
    let mut values = vec![1.0];
    values.extend(sol.y.iter().map(|y| -y));
    let bound = BoundSolve {
        value: sol.primal_objective,
        dual_value: sol.dual_objective,
        status: sol.status,
        problem,
        solution: sol,
        wall_ms: ms,
    };
    Ok(LasSolve {
        value: bound.value,
        bound,
        family_t: ft,
        moments: MomentVector { family: f2t, values },
        schur_min_eigenvalue: None,
    })
}

/// Dual of las′_t: the infimum of K(∅, ∅) over feasible kernels.
pub fn las_prime_dual(g: &Graph, t: usize, cfg: &Config) -> Result<LasSolve> {
    solve_kernel(g, t, true, cfg)
}

/// Dual of las_t, with equality constraints on A_t K.
pub fn las_plain_dual(g: &Graph, t: usize, cfg: &Config) -> Result<LasSolve> {
    solve_kernel(g, t, false, cfg)
}

/// Checks that K is feasible for the dual of las′_t (or las_t when
/// `positive` is false) and returns K(∅, ∅).
pub fn check_las_kernel(ft: &IndependentSetFamily, f2t: &IndependentSetFamily, k: &Mat, positive: bool, tol: f64) -> Result<f64> {
    if k.order() != ft.len() {
        return Err(Error::InfeasibleInput(format!("kernel order {} for {} sets", k.order(), ft.len())));
    }
    let min_eig = if k.order() == 0 { 0.0 } else { k.min_eigenvalue() };
    if min_eig < -tol {
        return Err(Error::NotPsd { min_eigenvalue: min_eig });
    }
    let a = at_operator(ft, f2t, k);
    for (s, v) in a.iter().enumerate().skip(1) {
        let target = -singleton_rhs(f2t, s);
        let bad = if positive { *v > target + tol } else { (v - target).abs() > tol };
        if bad {
            return Err(Error::InfeasibleInput(format!("A_t K({:?}) = {v}, needs {target}", f2t.sets()[s])));
        }
    }
    Ok(k[(0, 0)])
}

/// las′_t of a point configuration, on its conflict graph.
pub fn las_on_points(c: &PointConfiguration, t: usize, cfg: &Config) -> Result<f64> {
    las_prime(&c.conflict_graph(), t, cfg).map(|s| s.value)
}

/// Summary record of one level of the hierarchy on one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LasserreRecord {
    pub graph_hash: String,
    pub t: usize,
    pub las_prime: f64,
    pub las_plain: f64,
    pub dual_value: f64,
    pub family_sizes: Vec<usize>,
    pub status: SolveStatus,
}

pub fn lasserre_record(g: &Graph, t: usize, cfg: &Config) -> Result<LasserreRecord> {
    let prime = las_prime(g, t, cfg)?;
    let plain = las_plain(g, t, cfg)?;
    let dual = las_prime_dual(g, t, cfg)?;
    let f2t = &prime.moments.family;
    Ok(LasserreRecord {
        graph_hash: g.structure_hash(),
        t,
        las_prime: prime.value,
        las_plain: plain.value,
        dual_value: dual.value,
        family_sizes: (0..=2 * t).map(|k| f2t.count_up_to(k)).collect(),
        status: prime.bound.status,
    })
}
