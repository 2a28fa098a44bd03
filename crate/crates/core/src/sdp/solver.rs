//! Infeasible primal-dual path-following method with the HKM search
//! direction and Mehrotra predictor-corrector steps.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::problem::{BlockMatrix, BlockSpec, BlockValue, SdpProblem};
use crate::error::{check_cap, Result};
use crate::linalg::{self, cholesky, cholesky_inverse, cholesky_solve, congruence_inverse, Mat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    IterationLimit,
    NumericalFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Stop when |pobj − dobj| ≤ gap_tol · (1 + |pobj|).
    pub gap_tol: f64,
    /// Stop when both scaled residuals are at most this.
    pub residual_tol: f64,
    pub step_fraction: f64,
    /// Iterate norms beyond this are read as a certificate of infeasibility.
    pub divergence_bound: f64,
    /// Optional cap on the dual objective; exceeding it signals an
    /// infeasible primal.
    pub dual_objective_bound: Option<f64>,
    pub record_history: bool,
    pub max_order: usize,
    pub max_constraints: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iterations: 200,
            gap_tol: 1e-8,
            residual_tol: 1e-7,
            step_fraction: 0.98,
            divergence_bound: 1e12,
            dual_objective_bound: None,
            record_history: true,
            max_order: 2000,
            max_constraints: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// ‖b − 𝒜X‖₂ / (1 + ‖b‖₂)
    pub primal_residual: f64,
    /// ‖C − 𝒜*y − Z‖_F / (1 + ‖C‖_F)
    pub dual_residual: f64,
    /// ⟨X, Z⟩
    pub complementarity: f64,
    pub step_primal: f64,
    pub step_dual: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PresolveReport {
    pub original_constraints: usize,
    /// Indices of constraints implied by earlier ones and removed.
    pub dropped: Vec<usize>,
    /// Set when a dependent constraint has an inconsistent right-hand side.
    pub inconsistent: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub x: BlockMatrix,
    pub y: Vec<f64>,
    pub z: BlockMatrix,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    pub history: Vec<IterationRecord>,
    pub presolve: PresolveReport,
}

/// Constraint with off-diagonal entries expanded to both orientations.
struct Expanded {
    psd: Vec<(usize, usize, usize, f64)>,
    lp: Vec<(usize, usize, f64)>,
}

fn expand(p: &SdpProblem, keep: &[usize]) -> Vec<Expanded> {
    keep.iter()
        .map(|&i| {
            let mut psd = Vec::new();
            let mut lp = Vec::new();
            for e in &p.constraints[i].entries {
                match p.blocks[e.block] {
                    BlockSpec::Psd(_) => {
                        psd.push((e.block, e.row, e.col, e.value));
                        if e.row != e.col {
                            psd.push((e.block, e.col, e.row, e.value));
                        }
                    }
                    BlockSpec::Diagonal(_) => lp.push((e.block, e.row, e.value)),
                }
            }
            psd.sort_by_key(|t| (t.0, t.1, t.2));
            Expanded { psd, lp }
        })
        .collect()
}

/// Removes constraints that are linear combinations of earlier ones, using
/// an incremental Cholesky factorization of the constraint Gram matrix.
pub fn presolve(p: &SdpProblem) -> PresolveReport {
    let m = p.num_constraints();
    let mut report = PresolveReport {
        original_constraints: m,
        ..Default::default()
    };
    let mut by_key: HashMap<(usize, usize, usize), Vec<(usize, f64)>> = HashMap::new();
    for (i, c) in p.constraints.iter().enumerate() {
        for e in &c.entries {
            let w = if e.row == e.col { 1.0 } else { 2.0f64.sqrt() };
            by_key.entry((e.block, e.row, e.col)).or_default().push((i, w * e.value));
        }
    }
    let mut gram = vec![HashMap::<usize, f64>::new(); m];
    let mut keys: Vec<_> = by_key.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        let list = &by_key[&k];
        for &(i, a) in list {
            for &(j, b) in list {
                if j <= i {
                    *gram[i].entry(j).or_insert(0.0) += a * b;
                }
            }
        }
    }
    // l_rows[k] holds the factor row of the k-th kept constraint.
    let mut kept: Vec<usize> = Vec::new();
    let mut l_rows: Vec<Vec<f64>> = Vec::new();
    for (i, gi) in gram.iter().enumerate() {
        let gii = gi.get(&i).copied().unwrap_or(0.0);
        let mut row = Vec::with_capacity(kept.len());
        for (k, &j) in kept.iter().enumerate() {
            let gij = gi.get(&j).copied().unwrap_or(0.0);
            let s = linalg::dot(&row[..k], &l_rows[k][..k]);
            row.push((gij - s) / l_rows[k][k]);
        }
        let pivot = gii - linalg::dot(&row, &row);
        if gii > 0.0 && pivot > 1e-10 * gii {
            row.push(pivot.sqrt());
            kept.push(i);
            l_rows.push(row);
            continue;
        }
        // Dependent: express Aᵢ through the kept rows and compare rhs.
        let k = kept.len();
        let mut coef = row.clone();
        for a in (0..k).rev() {
            coef[a] /= l_rows[a][a];
            let ca = coef[a];
            for b in 0..a {
                coef[b] -= l_rows[a][b] * ca;
            }
        }
        let implied: f64 = coef.iter().zip(&kept).map(|(c, &j)| c * p.constraints[j].rhs).sum();
        let bi = p.constraints[i].rhs;
        if (bi - implied).abs() > 1e-9 * (1.0 + bi.abs()) && report.inconsistent.is_none() {
            report.inconsistent = Some(i);
        }
        report.dropped.push(i);
    }
    report
}

fn inverse_blocks(z: &BlockMatrix) -> Option<BlockMatrix> {
    let mut out = Vec::with_capacity(z.blocks.len());
    for b in &z.blocks {
        out.push(match b {
            BlockValue::Dense(m) => BlockValue::Dense(cholesky_inverse(&cholesky(m).ok()?)),
            BlockValue::Diagonal(d) => {
                if d.iter().any(|&v| !(v > 0.0)) {
                    return None;
                }
                BlockValue::Diagonal(d.iter().map(|v| 1.0 / v).collect())
            }
        });
    }
    Some(BlockMatrix { blocks: out })
}

/// Largest α with v + α dv ⪰ 0 (infinite when dv does not decrease any
/// direction).
fn max_step(v: &BlockMatrix, dv: &BlockMatrix) -> Option<f64> {
    let mut alpha = f64::INFINITY;
    for (b, db) in v.blocks.iter().zip(&dv.blocks) {
        match (b, db) {
            (BlockValue::Dense(m), BlockValue::Dense(dm)) => {
                if m.order() == 0 {
                    continue;
                }
                let l = cholesky(m).ok()?;
                let s = congruence_inverse(&l, dm);
                let lmin = s.min_eigenvalue();
                if lmin < 0.0 {
                    alpha = alpha.min(-1.0 / lmin);
                }
            }
            (BlockValue::Diagonal(d), BlockValue::Diagonal(dd)) => {
                for (x, dx) in d.iter().zip(dd) {
                    if *dx < 0.0 {
                        alpha = alpha.min(-x / dx);
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    Some(alpha)
}

/// sym(A B C) for dense blocks, elementwise product for diagonal blocks.
fn sym_triple(a: &BlockMatrix, b: &BlockMatrix, c: &BlockMatrix) -> BlockMatrix {
    let blocks = a
        .blocks
        .iter()
        .zip(&b.blocks)
        .zip(&c.blocks)
        .map(|((a, b), c)| match (a, b, c) {
            (BlockValue::Dense(a), BlockValue::Dense(b), BlockValue::Dense(c)) => {
                let mut t = a.matmul(b).matmul(c);
                t.symmetrize();
                BlockValue::Dense(t)
            }
            (BlockValue::Diagonal(a), BlockValue::Diagonal(b), BlockValue::Diagonal(c)) => {
                BlockValue::Diagonal(a.iter().zip(b).zip(c).map(|((x, y), z)| x * y * z).collect())
            }
            _ => unreachable!(),
        })
        .collect();
    BlockMatrix { blocks }
}

struct Reduced<'a> {
    p: &'a SdpProblem,
    keep: Vec<usize>,
    cons: Vec<Expanded>,
    b: Vec<f64>,
}

impl Reduced<'_> {
    fn apply(&self, x: &BlockMatrix) -> Vec<f64> {
        self.keep
            .iter()
            .map(|&i| x.dot_entries(&self.p.constraints[i].entries))
            .collect()
    }

    fn adjoint(&self, y: &[f64]) -> BlockMatrix {
        BlockMatrix::from_entries(
            &self.p.blocks,
            self.keep
                .iter()
                .zip(y)
                .flat_map(|(&i, &yi)| self.p.constraints[i].entries.iter().map(move |e| (e, yi))),
        )
    }

    /// Schur complement M_ij = ⟨Aᵢ, X Aⱼ W⟩.
    fn schur(&self, x: &BlockMatrix, w: &BlockMatrix) -> Mat {
        let m = self.cons.len();
        let mut out = Mat::zeros(m);
        let dense: Vec<Option<(&Mat, &Mat)>> = x
            .blocks
            .iter()
            .zip(&w.blocks)
            .map(|(a, b)| match (a, b) {
                (BlockValue::Dense(a), BlockValue::Dense(b)) => Some((a, b)),
                _ => None,
            })
            .collect();
        for i in 0..m {
            let ci = &self.cons[i];
            for j in i..m {
                let cj = &self.cons[j];
                let mut s = 0.0;
                for &(blk, p, q, a) in &ci.psd {
                    let (xb, wb) = dense[blk].unwrap();
                    let xr = xb.row(q);
                    let wr = wb.row(p);
                    let mut t = 0.0;
                    for &(blk2, r, c, v) in &cj.psd {
                        if blk2 == blk {
                            t += v * xr[r] * wr[c];
                        }
                    }
                    s += a * t;
                }
                out[(i, j)] = s;
            }
        }
        // Diagonal blocks: Σ_k a_ik a_jk x_k / z_k, accumulated per slot.
        let mut by_slot: HashMap<(usize, usize), Vec<(usize, f64)>> = HashMap::new();
        for (i, c) in self.cons.iter().enumerate() {
            for &(blk, k, v) in &c.lp {
                by_slot.entry((blk, k)).or_default().push((i, v));
            }
        }
        let mut slots: Vec<_> = by_slot.keys().copied().collect();
        slots.sort_unstable();
        for slot in slots {
            let (blk, k) = slot;
            let xk = x.diagonal_block(blk).unwrap()[k];
            let wk = w.diagonal_block(blk).unwrap()[k];
            let list = &by_slot[&slot];
            for &(i, a) in list {
                for &(j, b) in list {
                    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
                    if i <= j {
                        out[(lo, hi)] += a * b * xk * wk;
                    }
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                out[(i, j)] = out[(j, i)];
            }
        }
        out
    }
}

fn norm2(v: &[f64]) -> f64 {
    linalg::dot(v, v).sqrt()
}

/// Solves `p`. Errors only for invalid or oversized input; solver outcomes
/// are reported through [`SdpSolution::status`].
pub fn solve(p: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    p.validate()?;
    check_cap("sdp matrix order", p.total_order(), opts.max_order)?;
    check_cap("sdp constraint count", p.num_constraints(), opts.max_constraints)?;

    let report = presolve(p);
    let keep: Vec<usize> = (0..p.num_constraints())
        .filter(|i| !report.dropped.contains(i))
        .collect();
    let cons = expand(p, &keep);
    let b: Vec<f64> = keep.iter().map(|&i| p.constraints[i].rhs).collect();
    let red = Reduced { p, keep, cons, b };

    let c = p.objective_matrix();
    let n_total = p.total_order().max(1) as f64;
    let b_norm = norm2(&red.b);
    let c_norm = c.frobenius_norm();

    let tau = 1.0 + red.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let a_norm = p
        .constraints
        .iter()
        .map(|con| p.constraint_matrix_norm(con))
        .fold(0.0f64, f64::max);
    let eta = 1.0 + c_norm.max(a_norm);
    let mut x = BlockMatrix::scaled_identity(&p.blocks, tau);
    let mut z = BlockMatrix::scaled_identity(&p.blocks, eta);
    let mut y = vec![0.0; red.b.len()];

    let mut history = Vec::new();
    let mut status = SolveStatus::IterationLimit;
    let mut iterations = 0;
    let (mut last_ap, mut last_ad) = (0.0, 0.0);
    let mut stalled = 0;

    let finish = |x: BlockMatrix, y: Vec<f64>, z: BlockMatrix, status, iterations, history, report: PresolveReport| {
        let pobj = c.dot(&x);
        let dobj = linalg::dot(&red.b, &y);
        let rp: Vec<f64> = red.apply(&x).iter().zip(&red.b).map(|(a, b)| b - a).collect();
        let mut rd = c.clone();
        rd.axpy(-1.0, &red.adjoint(&y));
        rd.axpy(-1.0, &z);
        let mut full_y = vec![0.0; p.num_constraints()];
        for (k, &i) in red.keep.iter().enumerate() {
            full_y[i] = y[k];
        }
        SdpSolution {
            x,
            y: full_y,
            z,
            primal_objective: pobj,
            dual_objective: dobj,
            gap: (pobj - dobj).abs(),
            primal_residual: (norm2(&rp) / (1.0 + b_norm)).max(max_abs(&rp) / tau),
            dual_residual: rd.frobenius_norm() / (1.0 + c_norm),
            status,
            iterations,
            history,
            presolve: report,
        }
    };

    if report.inconsistent.is_some() {
        return Ok(finish(x, y, z, SolveStatus::Infeasible, 0, history, report));
    }

    for iter in 0..=opts.max_iterations {
        iterations = iter;
        let ax = red.apply(&x);
        let rp: Vec<f64> = red.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let mut rd = c.clone();
        rd.axpy(-1.0, &red.adjoint(&y));
        rd.axpy(-1.0, &z);
        let pobj = c.dot(&x);
        let dobj = linalg::dot(&red.b, &y);
        let pres = (norm2(&rp) / (1.0 + b_norm)).max(max_abs(&rp) / tau);
        let dres = rd.frobenius_norm() / (1.0 + c_norm);
        let xz = x.dot(&z);
        if opts.record_history {
            history.push(IterationRecord {
                iteration: iter,
                primal_objective: pobj,
                dual_objective: dobj,
                primal_residual: pres,
                dual_residual: dres,
                complementarity: xz,
                step_primal: last_ap,
                step_dual: last_ad,
            });
        }
        if !(pobj.is_finite() && dobj.is_finite()) {
            status = SolveStatus::NumericalFailure;
            break;
        }
        if (pobj - dobj).abs() <= opts.gap_tol * (1.0 + pobj.abs())
            && pres <= opts.residual_tol
            && dres <= opts.residual_tol
        {
            status = SolveStatus::Optimal;
            break;
        }
        let y_max = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if x.frobenius_norm() > opts.divergence_bound
            || y_max > opts.divergence_bound
            || opts.dual_objective_bound.is_some_and(|bd| dobj > bd && dres <= opts.residual_tol)
        {
            status = SolveStatus::Infeasible;
            break;
        }
        if iter == opts.max_iterations {
            break;
        }
        let mu = xz / n_total;

        let Some(w) = inverse_blocks(&z) else {
            status = SolveStatus::NumericalFailure;
            break;
        };
        let schur = red.schur(&x, &w);
        let Some(l) = factor_with_regularization(&schur) else {
            status = SolveStatus::NumericalFailure;
            break;
        };
        let h = sym_triple(&x, &rd, &w);
        let a_h = red.apply(&h);

        let direction = |g: &BlockMatrix| {
            let a_g = red.apply(g);
            let rhs: Vec<f64> = (0..rp.len()).map(|i| rp[i] - a_g[i] + a_h[i]).collect();
            let dy = cholesky_solve(&l, &rhs);
            let mut dz = rd.clone();
            dz.axpy(-1.0, &red.adjoint(&dy));
            let mut dx = g.clone();
            dx.axpy(-1.0, &sym_triple(&x, &dz, &w));
            (dx, dy, dz)
        };

        // Predictor.
        let mut g = x.clone();
        g.scale(-1.0);
        let (dxa, _, dza) = direction(&g);
        let (Some(ap), Some(ad)) = (max_step(&x, &dxa), max_step(&z, &dza)) else {
            status = SolveStatus::NumericalFailure;
            break;
        };
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let mut xa = x.clone();
        xa.axpy(ap, &dxa);
        let mut za = z.clone();
        za.axpy(ad, &dza);
        let mu_aff = xa.dot(&za) / n_total;
        let sigma = if mu > 0.0 { (mu_aff / mu).powi(3).clamp(0.0, 1.0) } else { 0.0 };

        // Corrector.
        let mut g = w.clone();
        g.scale(sigma * mu);
        g.axpy(-1.0, &x);
        g.axpy(-1.0, &sym_triple(&dxa, &dza, &w));
        let (dx, dy, dz) = direction(&g);
        let (Some(ap), Some(ad)) = (max_step(&x, &dx), max_step(&z, &dz)) else {
            status = SolveStatus::NumericalFailure;
            break;
        };
        let ap = (opts.step_fraction * ap).min(1.0);
        let ad = (opts.step_fraction * ad).min(1.0);
        x.axpy(ap, &dx);
        z.axpy(ad, &dz);
        for (yi, d) in y.iter_mut().zip(&dy) {
            *yi += ad * d;
        }
        last_ap = ap;
        last_ad = ad;
        if ap < 1e-10 && ad < 1e-10 {
            stalled += 1;
            if stalled >= 3 {
                status = SolveStatus::NumericalFailure;
                break;
            }
        } else {
            stalled = 0;
        }
    }
    Ok(finish(x, y, z, status, iterations, history, report))
}

fn factor_with_regularization(m: &Mat) -> Option<Mat> {
    if let Ok(l) = cholesky(m) {
        return Some(l);
    }
    let scale = (0..m.order()).map(|i| m[(i, i)].abs()).fold(0.0f64, f64::max).max(1e-300);
    let mut reg = 1e-14 * scale;
    for _ in 0..6 {
        let mut mm = m.clone();
        mm.add_diagonal(reg);
        if let Ok(l) = cholesky(&mm) {
            return Some(l);
        }
        reg *= 100.0;
    }
    None
}

impl SdpProblem {
    fn constraint_matrix_norm(&self, c: &super::problem::Constraint) -> f64 {
        c.entries
            .iter()
            .map(|e| if e.row == e.col { e.value * e.value } else { 2.0 * e.value * e.value })
            .sum::<f64>()
            .sqrt()
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}
