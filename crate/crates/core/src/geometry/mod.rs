//! Finite point configurations, their conflict graphs, and exact pack/cov.

pub mod axioms;
mod cover;
mod meb;
pub mod simplicial;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::graph::{maximum_independent_set, Graph};

pub use cover::{cov, cover_partition};
pub use meb::{min_enclosing_ball, Ball};

/// Default slack for the strict inequalities |x − y| < 2 and radius < 1.
pub const GEOM_TOL: f64 = 1e-9;

/// Finite set of points in ℝ^d. Spheres have radius 1, so two points
/// conflict when they are closer than 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    dim: usize,
    points: Vec<Vec<f64>>,
    tol: f64,
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

impl PointConfiguration {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tolerance(dim, points, GEOM_TOL)
    }

    pub fn with_tolerance(dim: usize, points: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!("point {i} has a non-finite coordinate")));
            }
        }
        let c = PointConfiguration { dim, points, tol };
        c.check_distinct()?;
        Ok(c)
    }

    fn check_distinct(&self) -> Result<()> {
        let n = self.points.len();
        if self.dim == 1 {
            let mut xs: Vec<(f64, usize)> = self.points.iter().map(|p| p[0]).zip(0..).collect();
            xs.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in xs.windows(2) {
                if w[1].0 - w[0].0 <= self.tol {
                    return Err(Error::InvalidArgument(format!("points {} and {} coincide", w[0].1, w[1].1)));
                }
            }
            return Ok(());
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if distance(&self.points[i], &self.points[j]) <= self.tol {
                    return Err(Error::InvalidArgument(format!("points {i} and {j} coincide")));
                }
            }
        }
        Ok(())
    }

    pub fn single(p: Vec<f64>) -> Self {
        let dim = p.len();
        PointConfiguration::new(dim, vec![p]).expect("one point is always valid")
    }

    /// Points on a line at the given coordinates.
    pub fn on_line(xs: &[f64]) -> Result<Self> {
        PointConfiguration::new(1, xs.iter().map(|&x| vec![x]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Whether points i and j are in conflict (0 < distance < 2 − tol).
    pub fn conflicts(&self, i: usize, j: usize) -> bool {
        i != j && distance(&self.points[i], &self.points[j]) < 2.0 - self.tol
    }

    /// Graph whose edges are the conflicting pairs.
    pub fn conflict_graph(&self) -> Graph {
        let n = self.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.conflicts(i, j) {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(n, &edges).expect("pairs are in range")
    }

    /// Image under an arbitrary map of points.
    pub fn map(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let pts: Vec<Vec<f64>> = self.points.iter().map(|p| f(p)).collect();
        let dim = pts.first().map_or(self.dim, Vec::len);
        PointConfiguration::with_tolerance(dim, pts, self.tol)
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        self.map(|p| p.iter().map(|v| v * s).collect())
    }

    pub fn translated(&self, t: &[f64]) -> Result<Self> {
        self.map(|p| p.iter().zip(t).map(|(a, b)| a + b).collect())
    }

    pub fn union(&self, other: &PointConfiguration) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::InvalidArgument("dimension mismatch".into()));
        }
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        PointConfiguration::with_tolerance(self.dim, pts, self.tol)
    }

    pub fn subset(&self, idx: &[usize]) -> Self {
        PointConfiguration {
            dim: self.dim,
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            tol: self.tol,
        }
    }

    /// Smallest distance between a point of `self` and a point of `other`.
    pub fn set_distance(&self, other: &PointConfiguration) -> f64 {
        let mut best = f64::INFINITY;
        for a in &self.points {
            for b in &other.points {
                best = best.min(distance(a, b));
            }
        }
        best
    }

    /// Parses "d n" followed by n lines of d coordinates.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let head: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse {
                line: ln,
                message: "header must be \"d n\"".into(),
            })?;
        let [d, n] = head[..] else {
            return Err(Error::Parse {
                line: ln,
                message: "header must be \"d n\"".into(),
            });
        };
        let mut pts = Vec::with_capacity(n);
        for (ln, l) in lines {
            let row: Vec<f64> = l
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse {
                    line: ln,
                    message: format!("invalid coordinate in {l:?}"),
                })?;
            if row.len() != d {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("expected {d} coordinates, found {}", row.len()),
                });
            }
            pts.push(row);
        }
        if pts.len() != n {
            return Err(Error::Parse {
                line: 1,
                message: format!("header announces {n} points, found {}", pts.len()),
            });
        }
        PointConfiguration::new(d, pts).map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.dim, self.len());
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }
}

/// Grid (h·ℤ)ⁿ ∩ [0, r]ⁿ.
pub fn cube_mesh(n: usize, r: f64, h: f64) -> Result<PointConfiguration> {
    if !(h > 0.0) || !(r >= 0.0) || n == 0 {
        return Err(Error::InvalidArgument(format!("invalid mesh parameters n={n} r={r} h={h}")));
    }
    let k = (r / h + 1e-9).floor() as usize + 1;
    let total = k.checked_pow(n as u32).ok_or_else(|| Error::InvalidArgument("mesh too large".into()))?;
    let mut pts = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let mut p = Vec::with_capacity(n);
        for _ in 0..n {
            p.push((c % k) as f64 * h);
            c /= k;
        }
        p.reverse();
        pts.push(p);
    }
    PointConfiguration::new(n, pts)
}

/// Largest subset with pairwise distances at least 2 (up to tolerance).
pub fn max_packing(c: &PointConfiguration, caps: &Caps) -> Result<Vec<usize>> {
    if c.dim() == 1 {
        // Interval scheduling: the leftmost admissible point is always safe.
        let mut order: Vec<usize> = (0..c.len()).collect();
        order.sort_by(|&a, &b| c.points[a][0].total_cmp(&c.points[b][0]));
        let mut chosen: Vec<usize> = Vec::new();
        for i in order {
            let ok = chosen.last().is_none_or(|&j| c.points[i][0] - c.points[j][0] >= 2.0 - c.tol);
            if ok {
                chosen.push(i);
            }
        }
        chosen.sort_unstable();
        return Ok(chosen);
    }
    maximum_independent_set(&c.conflict_graph(), caps)
}

/// pack(C): the size of a largest packing.
pub fn pack(c: &PointConfiguration, caps: &Caps) -> Result<usize> {
    max_packing(c, caps).map(|s| s.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::independence_number;

    fn tri19() -> PointConfiguration {
        let s = 1.9;
        PointConfiguration::new(2, vec![vec![0.0, 0.0], vec![s, 0.0], vec![s / 2.0, s * 3f64.sqrt() / 2.0]]).unwrap()
    }

    #[test]
    fn conflict_graph_examples() {
        let a = PointConfiguration::on_line(&[0.0, 2.0, 4.0]).unwrap();
        assert_eq!(a.conflict_graph().edge_count(), 0);
        let b = PointConfiguration::on_line(&[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(b.conflict_graph().edges(), &[(0, 1), (1, 2)]);
        assert_eq!(tri19().conflict_graph(), Graph::complete(3));
    }

    #[test]
    fn pack_examples() {
        let caps = Caps::default();
        assert_eq!(pack(&PointConfiguration::on_line(&[0.0, 2.0, 4.0]).unwrap(), &caps).unwrap(), 3);
        assert_eq!(pack(&cube_mesh(1, 10.0, 0.5).unwrap(), &caps).unwrap(), 6);
        assert_eq!(pack(&tri19(), &caps).unwrap(), 1);
    }

    #[test]
    fn one_dimensional_pack_agrees_with_graph_search() {
        let caps = Caps::default();
        for (r, h) in [(6.0, 0.5), (7.0, 0.75), (9.0, 1.0), (5.0, 0.3)] {
            let m = cube_mesh(1, r, h).unwrap();
            assert_eq!(pack(&m, &caps).unwrap(), independence_number(&m.conflict_graph(), &caps).unwrap());
        }
        for r in [4.0, 7.0, 12.5] {
            let m = cube_mesh(1, r, 0.5).unwrap();
            assert_eq!(pack(&m, &caps).unwrap(), (r / 2.0).floor() as usize + 1);
        }
    }

    #[test]
    fn mesh_counts() {
        assert_eq!(cube_mesh(1, 2.0, 1.0).unwrap().points(), &[vec![0.0], vec![1.0], vec![2.0]]);
        assert_eq!(cube_mesh(2, 1.0, 1.0).unwrap().len(), 4);
        for (n, r, h) in [(1usize, 10.0f64, 0.5f64), (2, 3.0, 0.75), (3, 2.0, 0.5)] {
            let k = (r / h).floor() as usize + 1;
            assert_eq!(cube_mesh(n, r, h).unwrap().len(), k.pow(n as u32));
        }
        assert!(cube_mesh(1, 1.0, 0.0).is_err());
    }

    #[test]
    fn rejects_duplicates_and_bad_rows() {
        assert!(PointConfiguration::on_line(&[0.0, 1e-12]).is_err());
        assert!(PointConfiguration::new(2, vec![vec![0.0]]).is_err());
        assert!(PointConfiguration::parse("2 1\n0 0 0\n").is_err());
        assert!(PointConfiguration::parse("2 2\n0 0\n").is_err());
        let c = tri19();
        assert_eq!(PointConfiguration::parse(&c.to_text()).unwrap(), c);
    }
}
