//! Randomized cases for the four axioms of a packing bound function:
//! sphere bound, Lipschitz inequality, union axiom and mesh axiom.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{cube_mesh, PointConfiguration};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    SphereBound,
    Lipschitz,
    Union,
    Mesh,
}

impl Axiom {
    pub const ALL: [Axiom; 4] = [Axiom::SphereBound, Axiom::Lipschitz, Axiom::Union, Axiom::Mesh];

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::SphereBound => "sphere_bound",
            Axiom::Lipschitz => "lipschitz",
            Axiom::Union => "union",
            Axiom::Mesh => "mesh",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AxiomCase {
    /// Points inside an open unit ball: A(C) = 1.
    SphereBound { config: PointConfiguration },
    /// `image` contains a distance-non-decreasing image of `config`:
    /// A(config) ≤ A(image).
    Lipschitz { config: PointConfiguration, image: PointConfiguration },
    /// d(left, right) ≥ 2: A(left ∪ right) = A(left) + A(right).
    Union {
        left: PointConfiguration,
        right: PointConfiguration,
        union: PointConfiguration,
    },
    /// config ⊆ mesh(ε): A(config / (1+ε)) ≤ A(mesh).
    Mesh {
        config: PointConfiguration,
        shrunk: PointConfiguration,
        mesh: PointConfiguration,
        eps: f64,
    },
}

impl AxiomCase {
    pub fn axiom(&self) -> Axiom {
        match self {
            AxiomCase::SphereBound { .. } => Axiom::SphereBound,
            AxiomCase::Lipschitz { .. } => Axiom::Lipschitz,
            AxiomCase::Union { .. } => Axiom::Union,
            AxiomCase::Mesh { .. } => Axiom::Mesh,
        }
    }

    /// Every configuration in the case, in a fixed order.
    pub fn configurations(&self) -> Vec<&PointConfiguration> {
        match self {
            AxiomCase::SphereBound { config } => vec![config],
            AxiomCase::Lipschitz { config, image } => vec![config, image],
            AxiomCase::Union { left, right, union } => vec![left, right, union],
            AxiomCase::Mesh { config, shrunk, mesh, .. } => vec![config, shrunk, mesh],
        }
    }

    /// Largest configuration appearing in the case.
    pub fn max_points(&self) -> usize {
        match self {
            AxiomCase::SphereBound { config } => config.len(),
            AxiomCase::Lipschitz { config, image } => config.len().max(image.len()),
            AxiomCase::Union { union, .. } => union.len(),
            AxiomCase::Mesh { config, mesh, .. } => config.len().max(mesh.len()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub axiom: Axiom,
    pub passed: bool,
    /// Left- and right-hand sides of the checked relation.
    pub lhs: f64,
    pub rhs: f64,
}

fn random_unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn random_in_ball(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> Vec<f64> {
    let u = random_unit_vector(rng, d);
    let r = radius * rng.gen::<f64>().powf(1.0 / d as f64);
    u.into_iter().map(|x| x * r).collect()
}

fn random_config(rng: &mut ChaCha8Rng, d: usize, n: usize, side: f64) -> PointConfiguration {
    loop {
        let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(0.0..side)).collect()).collect();
        if let Ok(c) = PointConfiguration::new(d, pts) {
            return c;
        }
    }
}

/// Random rotation (product of Givens rotations and an optional reflection).
fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    for i in 0..d {
        for j in (i + 1)..d {
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let (s, c) = th.sin_cos();
            for row in q.iter_mut() {
                let (a, b) = (row[i], row[j]);
                row[i] = c * a - s * b;
                row[j] = s * a + c * b;
            }
        }
    }
    if rng.gen_bool(0.5) {
        for row in q.iter_mut() {
            row[0] = -row[0];
        }
    }
    q
}

fn apply(q: &[Vec<f64>], t: &[f64], p: &[f64]) -> Vec<f64> {
    q.iter().zip(t).map(|(row, ti)| row.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() + ti).collect()
}

fn sphere_case(rng: &mut ChaCha8Rng) -> AxiomCase {
    let d = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=6);
    let center: Vec<f64> = (0..d).map(|_| rng.gen_range(-5.0..5.0)).collect();
    loop {
        let pts: Vec<Vec<f64>> = (0..k)
            .map(|_| random_in_ball(rng, d, 0.9).iter().zip(&center).map(|(a, b)| a + b).collect())
            .collect();
        if let Ok(config) = PointConfiguration::new(d, pts) {
            return AxiomCase::SphereBound { config };
        }
    }
}

fn lipschitz_case(rng: &mut ChaCha8Rng) -> AxiomCase {
    let d = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=8);
    let config = random_config(rng, d, n, 5.0);
    let q = random_orthogonal(rng, d);
    let t: Vec<f64> = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
    // Coordinate dilations with factors ≥ 1 never decrease distances;
    // composing with an isometry keeps that property.
    let factors: Vec<f64> = if rng.gen_bool(0.3) {
        vec![1.0; d]
    } else {
        (0..d).map(|_| rng.gen_range(1.0..1.5)).collect()
    };
    let mut image_pts: Vec<Vec<f64>> = config
        .points()
        .iter()
        .map(|p| {
            let dil: Vec<f64> = p.iter().zip(&factors).map(|(a, f)| a * f).collect();
            apply(&q, &t, &dil)
        })
        .collect();
    let extra = rng.gen_range(0..=12 - n.min(12)).min(4);
    for _ in 0..extra {
        image_pts.push((0..d).map(|_| rng.gen_range(-6.0..6.0)).collect());
    }
    let image = PointConfiguration::new(d, image_pts.clone())
        .or_else(|_| PointConfiguration::new(d, image_pts[..n].to_vec()))
        .expect("an injective image has distinct points");
    AxiomCase::Lipschitz { config, image }
}

fn union_case(rng: &mut ChaCha8Rng) -> AxiomCase {
    let d = rng.gen_range(1..=3);
    let (nl, nr) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let left = random_config(rng, d, nl, 4.0);
    let right0 = random_config(rng, d, nr, 4.0);
    let max_left = left.points().iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let min_right = right0.points().iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let gap = rng.gen_range(2.0..2.5);
    let mut shift = vec![0.0; d];
    shift[0] = max_left - min_right + gap;
    let right = right0.translated(&shift).expect("translation keeps points distinct");
    let union = left.union(&right).expect("separated sets are disjoint");
    AxiomCase::Union { left, right, union }
}

fn mesh_case(rng: &mut ChaCha8Rng) -> AxiomCase {
    let d = rng.gen_range(1..=3);
    let h = *[0.5, 0.75, 1.0].choose(rng).expect("non-empty");
    let side = [6.0, 3.0, 2.0][d - 1];
    let grid = cube_mesh(d, side, h).expect("valid mesh");
    let m = rng.gen_range(1..=grid.len().min(12));
    let mut idx: Vec<usize> = (0..grid.len()).collect();
    idx.shuffle(rng);
    idx.truncate(m);
    idx.sort_unstable();
    let mesh = grid.subset(&idx);
    let eps = rng.gen_range(0.05..0.5);
    loop {
        let k = rng.gen_range(1..=12);
        let pts: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                let base = &mesh.points()[rng.gen_range(0..mesh.len())];
                let off = random_in_ball(rng, d, 0.999 * eps);
                base.iter().zip(&off).map(|(a, b)| a + b).collect()
            })
            .collect();
        if let Ok(config) = PointConfiguration::new(d, pts) {
            let shrunk = config.scaled(1.0 / (1.0 + eps)).expect("scaling keeps points distinct");
            return AxiomCase::Mesh {
                config,
                shrunk,
                mesh,
                eps,
            };
        }
    }
}

/// Deterministic list of `count` cases for one axiom.
pub fn generate_cases(axiom: Axiom, count: usize, seed: u64) -> Vec<AxiomCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (axiom as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (0..count)
        .map(|_| match axiom {
            Axiom::SphereBound => sphere_case(&mut rng),
            Axiom::Lipschitz => lipschitz_case(&mut rng),
            Axiom::Union => union_case(&mut rng),
            Axiom::Mesh => mesh_case(&mut rng),
        })
        .collect()
}

/// Hex SHA-256 over the text form of every configuration, identifying a
/// case list.
pub fn case_digest(cases: &[AxiomCase]) -> String {
    let mut h = Sha256::new();
    for case in cases {
        h.update(case.axiom().name());
        for c in case.configurations() {
            h.update(c.to_text());
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Evaluates one case against a bound. `tol` is the slack for the
/// inequalities and the union equality.
pub fn check_case(case: &AxiomCase, bound: &dyn Fn(&PointConfiguration) -> Result<f64>, tol: f64) -> Result<CaseOutcome> {
    let (lhs, rhs, passed) = match case {
        AxiomCase::SphereBound { config } => {
            let v = bound(config)?;
            (v, 1.0, (v - 1.0).abs() <= tol)
        }
        AxiomCase::Lipschitz { config, image } => {
            let (a, b) = (bound(config)?, bound(image)?);
            (a, b, a <= b + tol)
        }
        AxiomCase::Union { left, right, union } => {
            let u = bound(union)?;
            let s = bound(left)? + bound(right)?;
            (u, s, (u - s).abs() <= tol)
        }
        AxiomCase::Mesh { shrunk, mesh, .. } => {
            let (a, b) = (bound(shrunk)?, bound(mesh)?);
            (a, b, a <= b + tol)
        }
    };
    Ok(CaseOutcome {
        axiom: case.axiom(),
        passed,
        lhs,
        rhs,
    })
}
