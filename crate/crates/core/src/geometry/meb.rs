//! Smallest enclosing ball by Welzl's recursion.

use super::distance;
use crate::linalg::solve_general;

#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    fn contains(&self, p: &[f64]) -> bool {
        self.radius >= 0.0 && distance(&self.center, p) <= self.radius * (1.0 + 1e-12) + 1e-14
    }
}

/// Ball whose boundary passes through all of `r`, centered in their affine
/// hull. `None` when the points are affinely dependent.
fn circumball(r: &[&[f64]]) -> Option<Ball> {
    let p0 = r[0];
    let k = r.len() - 1;
    if k == 0 {
        return Some(Ball {
            center: p0.to_vec(),
            radius: 0.0,
        });
    }
    let v: Vec<Vec<f64>> = r[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let gram: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| 2.0 * dot(&v[i], &v[j])).collect()).collect();
    let rhs: Vec<f64> = (0..k).map(|i| dot(&v[i], &v[i])).collect();
    let lam = solve_general(&gram, &rhs)?;
    let mut center = p0.to_vec();
    for (l, vi) in lam.iter().zip(&v) {
        for (c, x) in center.iter_mut().zip(vi) {
            *c += l * x;
        }
    }
    let radius = r.iter().map(|p| distance(&center, p)).fold(0.0, f64::max);
    Some(Ball { center, radius })
}

/// Smallest ball containing all of `r` and having them on its boundary
/// when possible; degenerate supports fall back to their sub-supports.
fn ball_with_support(r: &[&[f64]], dim: usize) -> Ball {
    if r.is_empty() {
        return Ball {
            center: vec![0.0; dim],
            radius: -1.0,
        };
    }
    if let Some(b) = circumball(r) {
        return b;
    }
    let mut best: Option<Ball> = None;
    for skip in 0..r.len() {
        let sub: Vec<&[f64]> = r.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, p)| *p).collect();
        let b = ball_with_support(&sub, dim);
        if r.iter().all(|p| b.contains(p)) && best.as_ref().is_none_or(|bb| b.radius < bb.radius) {
            best = Some(b);
        }
    }
    best.expect("some sub-support encloses a dependent set")
}

fn welzl<'a>(p: &[&'a [f64]], r: &mut Vec<&'a [f64]>, dim: usize) -> Ball {
    if p.is_empty() || r.len() == dim + 1 {
        return ball_with_support(r, dim);
    }
    let (last, rest) = p.split_last().expect("non-empty");
    let b = welzl(rest, r, dim);
    if b.contains(last) {
        return b;
    }
    r.push(last);
    let b = welzl(rest, r, dim);
    r.pop();
    b
}

/// Exact smallest enclosing ball of a non-empty point list.
pub fn min_enclosing_ball(points: &[Vec<f64>]) -> Ball {
    assert!(!points.is_empty(), "enclosing ball of an empty set");
    let dim = points[0].len();
    let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
    let mut r = Vec::with_capacity(dim + 1);
    welzl(&refs, &mut r, dim)
}
