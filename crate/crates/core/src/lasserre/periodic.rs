//! Finite restrictions of the correlation measure of a periodic packing.
//!
//! For P = ⋃ᵢ (Λ + tᵢ) and a window W, the measure is approximated by
//! averaging, over shifts v sampled on a grid in one fundamental cell, the
//! counting measure of the sets S ⊆ (P + v) ∩ W with |S| ≤ 2t.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::geometry::distance;
use crate::linalg::{solve_general, Mat};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPacking {
    dim: usize,
    /// Lattice basis vectors, one per row.
    basis: Vec<Vec<f64>>,
    translates: Vec<Vec<f64>>,
}

fn det(b: &[Vec<f64>]) -> f64 {
    match b.len() {
        1 => b[0][0],
        _ => b[0][0] * b[1][1] - b[0][1] * b[1][0],
    }
}

impl PeriodicPacking {
    /// Validates the lattice and checks that distinct points of the packing
    /// are at distance at least 2.
    pub fn new(basis: Vec<Vec<f64>>, translates: Vec<Vec<f64>>) -> Result<Self> {
        let dim = basis.len();
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidLattice(format!("dimension {dim} is not 1 or 2")));
        }
        if basis.iter().chain(&translates).any(|v| v.len() != dim || v.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidLattice("vectors must be finite with one entry per dimension".into()));
        }
        if det(&basis).abs() < 1e-12 {
            return Err(Error::InvalidLattice("basis is singular".into()));
        }
        if translates.is_empty() {
            return Err(Error::InvalidLattice("no translates".into()));
        }
        let p = PeriodicPacking { dim, basis, translates };
        for t in &p.translates {
            let lo: Vec<f64> = t.iter().map(|x| x - 2.0).collect();
            let hi: Vec<f64> = t.iter().map(|x| x + 2.0).collect();
            for q in p.points_in_box(&lo, &hi, &vec![0.0; dim]) {
                let d = distance(t, &q);
                if d > 1e-9 && d < 2.0 - 1e-9 {
                    return Err(Error::InvalidLattice(format!("points {t:?} and {q:?} are at distance {d} < 2")));
                }
            }
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn translates(&self) -> &[Vec<f64>] {
        &self.translates
    }

    pub fn cell_volume(&self) -> f64 {
        det(&self.basis).abs()
    }

    /// Points per unit volume.
    pub fn center_density(&self) -> f64 {
        self.translates.len() as f64 / self.cell_volume()
    }

    fn combine(&self, coeffs: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|k| coeffs.iter().zip(&self.basis).map(|(c, b)| c * b[k]).sum()).collect()
    }

    /// Points of P + shift inside the closed box [lo, hi].
    pub fn points_in_box(&self, lo: &[f64], hi: &[f64], shift: &[f64]) -> Vec<Vec<f64>> {
        let d = self.dim;
        let bt: Vec<Vec<f64>> = (0..d).map(|k| (0..d).map(|j| self.basis[j][k]).collect()).collect();
        let mut out = Vec::new();
        for t in &self.translates {
            // Coefficient ranges from the images of the box corners.
            let mut cmin = vec![f64::INFINITY; d];
            let mut cmax = vec![f64::NEG_INFINITY; d];
            for corner in 0..1usize << d {
                let x: Vec<f64> = (0..d)
                    .map(|k| if corner >> k & 1 == 1 { hi[k] } else { lo[k] } - t[k] - shift[k])
                    .collect();
                let c = solve_general(&bt, &x).expect("basis is nonsingular");
                for k in 0..d {
                    cmin[k] = cmin[k].min(c[k]);
                    cmax[k] = cmax[k].max(c[k]);
                }
            }
            let ranges: Vec<(i64, i64)> = (0..d).map(|k| (cmin[k].floor() as i64 - 1, cmax[k].ceil() as i64 + 1)).collect();
            let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            loop {
                let coeffs: Vec<f64> = idx.iter().map(|&i| i as f64).collect();
                let base = self.combine(&coeffs);
                let p: Vec<f64> = (0..d).map(|k| base[k] + t[k] + shift[k]).collect();
                if (0..d).all(|k| p[k] >= lo[k] - 1e-12 && p[k] <= hi[k] + 1e-12) {
                    out.push(p);
                }
                let mut k = 0;
                while k < d {
                    idx[k] += 1;
                    if idx[k] <= ranges[k].1 {
                        break;
                    }
                    idx[k] = ranges[k].0;
                    k += 1;
                }
                if k == d {
                    break;
                }
            }
        }
        out.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Window {
    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    fn boundary_distance(&self, p: &[f64]) -> f64 {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(x, (a, b))| (x - a).min(b - x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// One atom of the restricted measure: a point set and its weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub points: Vec<Vec<f64>>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRestriction {
    pub dim: usize,
    pub t: usize,
    pub samples: usize,
    /// Exact points per unit volume of the packing.
    pub center_density: f64,
    /// Average number of window points per unit window volume.
    pub density_estimate: f64,
    /// μ(I_{=1}): the average number of points in the window.
    pub singleton_mass: f64,
    pub atoms: Vec<Atom>,
    /// Sets of size ≤ t whose points all lie at distance ≥ 4t from the
    /// window boundary; the PSD check runs on these.
    pub interior_sets: usize,
    pub min_eigenvalue: f64,
    pub psd_ok: bool,
}

type Key = Vec<Vec<i64>>;

fn key_of(points: &[&Vec<f64>]) -> Key {
    let mut k: Key = points.iter().map(|p| p.iter().map(|x| (x * 1e9).round() as i64).collect()).collect();
    k.sort();
    k
}

fn subsets_up_to<T: Clone>(items: &[T], size: usize, out: &mut Vec<Vec<T>>) {
    fn rec<T: Clone>(items: &[T], from: usize, size: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        out.push(cur.clone());
        if cur.len() == size {
            return;
        }
        for i in from..items.len() {
            cur.push(items[i].clone());
            rec(items, i + 1, size, cur, out);
            cur.pop();
        }
    }
    rec(items, 0, size, &mut Vec::new(), out);
}

/// Restriction of the correlation measure of order 2t to the window, with
/// `samples_per_axis`^n shifts per fundamental cell. `cap` bounds the number
/// of atoms.
pub fn periodic_correlation_restriction(
    packing: &PeriodicPacking,
    t: usize,
    window: &Window,
    samples_per_axis: usize,
    cap: usize,
) -> Result<CorrelationRestriction> {
    let d = packing.dim();
    if window.lo.len() != d || window.hi.len() != d || window.lo.iter().zip(&window.hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
        return Err(Error::InvalidArgument("window must be a bounded box of the lattice dimension".into()));
    }
    if t == 0 || samples_per_axis == 0 {
        return Err(Error::InvalidArgument("level and sample count must be positive".into()));
    }
    let total = samples_per_axis.pow(d as u32);
    let w = 1.0 / total as f64;
    let margin = 4.0 * t as f64;
    let mut atoms: HashMap<Key, Atom> = HashMap::new();
    let mut point_total = 0usize;
    let mut interior: HashMap<Key, usize> = HashMap::new();
    for s in 0..total {
        let coeffs: Vec<f64> = (0..d).map(|k| ((s / samples_per_axis.pow(k as u32)) % samples_per_axis) as f64 + 0.5).map(|c| c / samples_per_axis as f64).collect();
        let shift = packing.combine(&coeffs);
        let pts = packing.points_in_box(&window.lo, &window.hi, &shift);
        point_total += pts.len();
        let refs: Vec<&Vec<f64>> = pts.iter().collect();
        let mut sets = Vec::new();
        subsets_up_to(&refs, 2 * t, &mut sets);
        for set in sets {
            let key = key_of(&set);
            if set.len() <= t && set.iter().all(|p| window.boundary_distance(p) >= margin) {
                let next = interior.len();
                interior.entry(key.clone()).or_insert(next);
            }
            atoms
                .entry(key)
                .or_insert_with(|| Atom {
                    points: set.iter().map(|p| (*p).clone()).collect(),
                    weight: 0.0,
                })
                .weight += w;
            check_cap("correlation atoms", atoms.len(), cap)?;
        }
    }
    let mut index: Vec<(Key, usize)> = interior.into_iter().collect();
    index.sort_by_key(|(_, i)| *i);
    let keys: Vec<Key> = index.into_iter().map(|(k, _)| k).collect();
    check_cap("correlation moment matrix order", keys.len(), 2000)?;
    let union_weight = |a: &Key, b: &Key| -> f64 {
        let mut u: Key = a.iter().chain(b).cloned().collect();
        u.sort();
        u.dedup();
        atoms.get(&u).map_or(0.0, |at| at.weight)
    };
    let m = Mat::from_fn(keys.len(), |i, j| union_weight(&keys[i], &keys[j]));
    let min_eigenvalue = if keys.is_empty() { 0.0 } else { m.min_eigenvalue() };
    let mut atoms: Vec<Atom> = atoms.into_values().collect();
    atoms.sort_by_cached_key(|a| (a.points.len(), key_of(&a.points.iter().collect::<Vec<_>>())));
    let singleton_mass = point_total as f64 * w;
    Ok(CorrelationRestriction {
        dim: d,
        t,
        samples: total,
        center_density: packing.center_density(),
        density_estimate: singleton_mass / window.volume(),
        singleton_mass,
        atoms,
        interior_sets: keys.len(),
        min_eigenvalue,
        psd_ok: min_eigenvalue >= -1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_validation() {
        assert!(matches!(PeriodicPacking::new(vec![], vec![vec![]]), Err(Error::InvalidLattice(_))));
        assert!(matches!(PeriodicPacking::new(vec![vec![1.0]], vec![vec![0.0]]), Err(Error::InvalidLattice(_))));
        assert!(matches!(PeriodicPacking::new(vec![vec![2.0, 0.0], vec![4.0, 0.0]], vec![vec![0.0, 0.0]]), Err(Error::InvalidLattice(_))));
        assert!(matches!(PeriodicPacking::new(vec![vec![5.0]], vec![vec![0.0], vec![1.5]]), Err(Error::InvalidLattice(_))));
        assert!(matches!(PeriodicPacking::new(vec![vec![2.0]], vec![]), Err(Error::InvalidLattice(_))));
        assert!(PeriodicPacking::new(vec![vec![2.0, 0.0], vec![1.0, 3f64.sqrt()]], vec![vec![0.0, 0.0]]).is_ok());
    }

    #[test]
    fn spacing_two_line() {
        let p = PeriodicPacking::new(vec![vec![2.0]], vec![vec![0.0]]).unwrap();
        assert_eq!(p.center_density(), 0.5);
        let w = Window { lo: vec![0.0], hi: vec![24.0] };
        let r = periodic_correlation_restriction(&p, 1, &w, 8, 50_000).unwrap();
        assert!((r.density_estimate - 0.5).abs() < 1e-12);
        assert!(r.psd_ok && r.min_eigenvalue >= -1e-6);
        assert!(r.interior_sets > 1);
        let total: f64 = r.atoms.iter().filter(|a| a.points.len() == 1).map(|a| a.weight).sum();
        assert!((total - r.singleton_mass).abs() < 1e-12);
        let empty = r.atoms.iter().find(|a| a.points.is_empty()).unwrap();
        assert!((empty.weight - 1.0).abs() < 1e-12);
        let r2 = periodic_correlation_restriction(&p, 2, &Window { lo: vec![0.0], hi: vec![30.0] }, 4, 50_000).unwrap();
        assert!(r2.psd_ok);
    }

    #[test]
    fn two_translates_and_hexagonal() {
        let p = PeriodicPacking::new(vec![vec![5.0]], vec![vec![0.0], vec![2.5]]).unwrap();
        assert!((p.center_density() - 0.4).abs() < 1e-15);
        let r = periodic_correlation_restriction(&p, 1, &Window { lo: vec![0.0], hi: vec![20.0] }, 10, 50_000).unwrap();
        assert!((r.density_estimate - 0.4).abs() < 1e-12);
        assert!(r.psd_ok);
        let hex = PeriodicPacking::new(vec![vec![2.0, 0.0], vec![1.0, 3f64.sqrt()]], vec![vec![0.0, 0.0]]).unwrap();
        assert!((hex.center_density() - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-15);
        let w = Window { lo: vec![0.0, 0.0], hi: vec![12.0, 12.0] };
        let r = periodic_correlation_restriction(&hex, 1, &w, 3, 50_000).unwrap();
        assert!((r.density_estimate - hex.center_density()).abs() < 0.05);
        assert!(r.psd_ok);
    }

    #[test]
    fn window_points_are_separated() {
        let hex = PeriodicPacking::new(vec![vec![2.0, 0.0], vec![1.0, 3f64.sqrt()]], vec![vec![0.0, 0.0]]).unwrap();
        let pts = hex.points_in_box(&[-3.0, -3.0], &[3.0, 3.0], &[0.3, 0.1]);
        assert!(pts.len() >= 7);
        for i in 0..pts.len() {
            for j in 0..i {
                assert!(distance(&pts[i], &pts[j]) >= 2.0 - 1e-9);
            }
        }
    }
}
