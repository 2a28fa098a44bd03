//! Exact covering number by open unit balls.
//!
//! A finite set is covered by k open unit balls exactly when it splits into
//! k clusters whose smallest enclosing balls have radius below 1, so cov is
//! a minimum set partition problem.

use std::collections::HashMap;

use super::{distance, min_enclosing_ball, PointConfiguration};
use crate::config::Caps;
use crate::error::{check_cap, Result};

struct Search<'a> {
    c: &'a PointConfiguration,
    order: Vec<usize>,
    limit: f64,
    memo: HashMap<u32, bool>,
    best: Vec<u32>,
}

impl Search<'_> {
    fn feasible(&mut self, mask: u32) -> bool {
        if mask.count_ones() <= 1 {
            return true;
        }
        if let Some(&f) = self.memo.get(&mask) {
            return f;
        }
        let pts: Vec<Vec<f64>> = (0..32)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.c.points()[i].clone())
            .collect();
        let f = min_enclosing_ball(&pts).radius < self.limit;
        self.memo.insert(mask, f);
        f
    }

    fn rec(&mut self, k: usize, clusters: &mut Vec<u32>) {
        if clusters.len() >= self.best.len() {
            return;
        }
        if k == self.order.len() {
            self.best = clusters.clone();
            return;
        }
        let p = self.order[k];
        for j in 0..clusters.len() {
            let members = clusters[j];
            // Two points at distance ≥ 2·limit never share a cluster.
            let far = (0..32).any(|i| members >> i & 1 == 1 && distance(&self.c.points()[i], &self.c.points()[p]) >= 2.0 * self.limit);
            if far {
                continue;
            }
            let next = members | 1 << p;
            if self.feasible(next) {
                clusters[j] = next;
                self.rec(k + 1, clusters);
                clusters[j] = members;
            }
        }
        clusters.push(1 << p);
        self.rec(k + 1, clusters);
        clusters.pop();
    }
}

/// Greedy cover in 1-D: open a cluster at the leftmost uncovered point and
/// extend it while the span stays below 2·limit. Optimal for intervals.
fn cover_line(c: &PointConfiguration) -> Vec<Vec<usize>> {
    let limit = 1.0 - c.tol();
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| c.points()[a][0].total_cmp(&c.points()[b][0]));
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut start = f64::NEG_INFINITY;
    for i in order {
        let x = c.points()[i][0];
        match out.last_mut() {
            Some(cl) if x - start < 2.0 * limit => cl.push(i),
            _ => {
                start = x;
                out.push(vec![i]);
            }
        }
    }
    out
}

/// A minimum partition of the points into clusters each fitting in an open
/// unit ball.
pub fn cover_partition(c: &PointConfiguration, caps: &Caps) -> Result<Vec<Vec<usize>>> {
    if c.is_empty() {
        return Ok(Vec::new());
    }
    if c.dim() == 1 {
        return Ok(cover_line(c));
    }
    check_cap("cover point count", c.len(), caps.cover.min(32))?;
    let n = c.len();
    // Farthest-first order puts mutually distant points early, which opens
    // clusters quickly and tightens the bound.
    let mut order = vec![0usize];
    let mut dmin: Vec<f64> = (0..n).map(|i| distance(&c.points()[i], &c.points()[0])).collect();
    while order.len() < n {
        let next = (0..n)
            .filter(|i| !order.contains(i))
            .max_by(|&a, &b| dmin[a].total_cmp(&dmin[b]).then(b.cmp(&a)))
            .expect("points remain");
        order.push(next);
        for (d, p) in dmin.iter_mut().zip(c.points()) {
            *d = d.min(distance(p, &c.points()[next]));
        }
    }
    let mut s = Search {
        c,
        order,
        limit: 1.0 - c.tol(),
        memo: HashMap::new(),
        best: (0..n).map(|i| 1u32 << i).collect(),
    };
    s.rec(0, &mut Vec::new());
    Ok(s
        .best
        .iter()
        .map(|&m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect())
}

/// cov(C): the fewest open unit balls covering the points.
pub fn cov(c: &PointConfiguration, caps: &Caps) -> Result<usize> {
    cover_partition(c, caps).map(|p| p.len())
}
