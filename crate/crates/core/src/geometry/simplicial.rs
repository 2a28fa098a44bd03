//! Kuhn triangulations of cubes, barycentric coordinates, and lifting of
//! kernels from mesh vertices to arbitrary points of the complex.

use std::collections::HashMap;

use super::{distance, PointConfiguration};
use crate::error::{Error, Result};
use crate::linalg::{solve_general, Mat};

#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex {
    pub vertices: PointConfiguration,
    /// Each top simplex lists dim + 1 vertex indices.
    pub simplices: Vec<Vec<usize>>,
    /// Every simplex has diameter strictly below this.
    pub mesh: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricPoint {
    pub simplex: usize,
    pub weights: Vec<f64>,
}

impl BarycentricPoint {
    /// (vertex index, weight) pairs with nonzero weight.
    pub fn support<'a>(&'a self, sc: &'a SimplicialComplex) -> impl Iterator<Item = (usize, f64)> + 'a {
        sc.simplices[self.simplex]
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w != 0.0)
            .map(|(&v, &w)| (v, w))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Kuhn triangulation of [0, r]ⁿ into cubes of side r/c, each split into
/// n! simplices along coordinate paths. c = ⌈r√n/ε⌉, increased by one when
/// the cube diagonal would equal ε exactly.
pub fn triangulate_box(n: usize, r: f64, eps: f64) -> Result<SimplicialComplex> {
    if !(1..=3).contains(&n) || !(r > 0.0) || !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("triangulation needs 1 ≤ n ≤ 3, r > 0, ε > 0 (got {n}, {r}, {eps})")));
    }
    let sqrt_n = (n as f64).sqrt();
    let mut c = (r * sqrt_n / eps).ceil().max(1.0) as usize;
    if r / c as f64 * sqrt_n >= eps {
        c += 1;
    }
    let k = c + 1;
    let side = r / c as f64;
    let total = k.pow(n as u32);
    let index = |coords: &[usize]| coords.iter().fold(0, |acc, &x| acc * k + x);
    let mut pts = Vec::with_capacity(total);
    for code in 0..total {
        let mut rem = code;
        let mut p = vec![0.0; n];
        for a in (0..n).rev() {
            p[a] = (rem % k) as f64 * side;
            rem /= k;
        }
        pts.push(p);
    }
    let perms = permutations(n);
    let mut simplices = Vec::with_capacity(c.pow(n as u32) * perms.len());
    for cube in 0..c.pow(n as u32) {
        let mut rem = cube;
        let mut base = vec![0usize; n];
        for a in (0..n).rev() {
            base[a] = rem % c;
            rem /= c;
        }
        for perm in &perms {
            let mut cur = base.clone();
            let mut s = vec![index(&cur)];
            for &axis in perm {
                cur[axis] += 1;
                s.push(index(&cur));
            }
            simplices.push(s);
        }
    }
    Ok(SimplicialComplex {
        vertices: PointConfiguration::new(n, pts)?,
        simplices,
        mesh: eps,
    })
}

impl SimplicialComplex {
    pub fn dim(&self) -> usize {
        self.vertices.dim()
    }

    fn vertex(&self, i: usize) -> &[f64] {
        &self.vertices.points()[i]
    }

    pub fn diameter(&self, s: usize) -> f64 {
        let vs = &self.simplices[s];
        let mut d: f64 = 0.0;
        for a in 0..vs.len() {
            for b in (a + 1)..vs.len() {
                d = d.max(distance(self.vertex(vs[a]), self.vertex(vs[b])));
            }
        }
        d
    }

    fn edge_matrix(&self, s: usize) -> Vec<Vec<f64>> {
        // Columns are v_i − v_0; returned row-major as an n×n system.
        let vs = &self.simplices[s];
        let v0 = self.vertex(vs[0]);
        let n = self.dim();
        (0..n)
            .map(|row| (1..=n).map(|col| self.vertex(vs[col])[row] - v0[row]).collect())
            .collect()
    }

    /// Checks non-degeneracy, the diameter bound, and that every facet is
    /// shared by at most two simplices.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let mut facets: HashMap<Vec<usize>, usize> = HashMap::new();
        for (s, vs) in self.simplices.iter().enumerate() {
            if vs.len() != n + 1 {
                return Err(Error::InvalidArgument(format!("simplex {s} has {} vertices", vs.len())));
            }
            let m = self.edge_matrix(s);
            let probe: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
            if solve_general(&m, &probe).is_none() {
                return Err(Error::InvalidArgument(format!("simplex {s} is degenerate")));
            }
            if self.diameter(s) >= self.mesh {
                return Err(Error::InvalidArgument(format!("simplex {s} has diameter ≥ {}", self.mesh)));
            }
            let mut sorted = vs.clone();
            sorted.sort_unstable();
            for skip in 0..=n {
                let facet: Vec<usize> = sorted.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                *facets.entry(facet).or_insert(0) += 1;
            }
        }
        if let Some((f, _)) = facets.iter().find(|(_, &cnt)| cnt > 2) {
            return Err(Error::InvalidArgument(format!("facet {f:?} is shared by more than two simplices")));
        }
        Ok(())
    }

    /// Barycentric coordinates of y in the first simplex containing it.
    pub fn barycentric_locate(&self, y: &[f64]) -> Result<BarycentricPoint> {
        let n = self.dim();
        if y.len() != n {
            return Err(Error::InvalidArgument("point dimension differs from complex".into()));
        }
        for s in 0..self.simplices.len() {
            let vs = &self.simplices[s];
            let v0 = self.vertex(vs[0]);
            let rhs: Vec<f64> = (0..n).map(|i| y[i] - v0[i]).collect();
            let Some(lam) = solve_general(&self.edge_matrix(s), &rhs) else {
                continue;
            };
            let l0 = 1.0 - lam.iter().sum::<f64>();
            let mut w: Vec<f64> = std::iter::once(l0).chain(lam).collect();
            if w.iter().all(|&x| x >= -1e-12) {
                for x in w.iter_mut() {
                    if *x <= 1e-12 {
                        *x = 0.0;
                    }
                }
                let total: f64 = w.iter().sum();
                w.iter_mut().for_each(|x| *x /= total);
                return Ok(BarycentricPoint { simplex: s, weights: w });
            }
        }
        Err(Error::OutsideComplex)
    }

    pub fn reconstruct(&self, b: &BarycentricPoint) -> Vec<f64> {
        let mut p = vec![0.0; self.dim()];
        for (v, w) in b.support(self) {
            for (pi, vi) in p.iter_mut().zip(self.vertex(v)) {
                *pi += w * vi;
            }
        }
        p
    }
}

/// L(x, y) = Σ aᵢ bⱼ K(xᵢ, yⱼ) where a, b are the barycentric weights of
/// x and y. Positive semidefinite whenever K is.
pub fn lift_kernel(k: &Mat, sc: &SimplicialComplex, xs: &[Vec<f64>], psd_tol: f64) -> Result<Mat> {
    if k.order() != sc.vertices.len() {
        return Err(Error::InvalidArgument(format!(
            "kernel order {} differs from vertex count {}",
            k.order(),
            sc.vertices.len()
        )));
    }
    for i in 0..k.order() {
        for j in 0..i {
            if (k[(i, j)] - k[(j, i)]).abs() > psd_tol {
                return Err(Error::InvalidArgument("kernel is not symmetric".into()));
            }
        }
    }
    let lmin = k.min_eigenvalue();
    if lmin < -psd_tol {
        return Err(Error::NotPsd { min_eigenvalue: lmin });
    }
    let located: Vec<Vec<(usize, f64)>> = xs
        .iter()
        .map(|x| sc.barycentric_locate(x).map(|b| b.support(sc).collect()))
        .collect::<Result<_>>()?;
    Ok(Mat::from_fn(xs.len(), |i, j| {
        let mut s = 0.0;
        for &(a, wa) in &located[i] {
            for &(b, wb) in &located[j] {
                s += wa * wb * k[(a, b)];
            }
        }
        s
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counts_and_validity() {
        for n in 1..=3 {
            for (r, eps) in [(1.0, 0.7), (2.0, 0.9), (1.5, 1.1)] {
                let sc = triangulate_box(n, r, eps).unwrap();
                sc.validate().unwrap();
                let c = (r * (n as f64).sqrt() / eps).ceil() as usize;
                let fact = (1..=n).product::<usize>();
                assert_eq!(sc.simplices.len(), c.pow(n as u32) * fact);
            }
        }
        // One cube in the plane splits into two triangles.
        let sc = triangulate_box(2, 1.0, 1.5).unwrap();
        assert_eq!(sc.simplices.len(), 2);
        // Exact diagonal equal to ε forces one more subdivision.
        let sc = triangulate_box(1, 1.0, 0.5).unwrap();
        assert_eq!(sc.simplices.len(), 3);
        sc.validate().unwrap();
    }

    #[test]
    fn barycentric_examples() {
        let sc = triangulate_box(2, 2.0, 1.5).unwrap();
        let v = sc.vertices.points()[4].clone();
        let b = sc.barycentric_locate(&v).unwrap();
        let support: Vec<_> = b.support(&sc).collect();
        assert_eq!(support, vec![(4, 1.0)]);
        let (p, q) = (&sc.vertices.points()[0], &sc.vertices.points()[1]);
        let mid: Vec<f64> = p.iter().zip(q).map(|(a, b)| (a + b) / 2.0).collect();
        let b = sc.barycentric_locate(&mid).unwrap();
        let mut ws: Vec<f64> = b.support(&sc).map(|(_, w)| w).collect();
        ws.sort_by(f64::total_cmp);
        assert!((ws[0] - 0.5).abs() < 1e-12 && (ws[1] - 0.5).abs() < 1e-12 && ws.len() == 2);
        assert_eq!(sc.barycentric_locate(&[3.0, 0.0]), Err(Error::OutsideComplex));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let y = vec![rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)];
            let b = sc.barycentric_locate(&y).unwrap();
            let back = sc.reconstruct(&b);
            assert!(distance(&back, &y) < 1e-10);
        }
    }

    #[test]
    fn lifting_restricts_and_preserves_rank_one() {
        let sc = triangulate_box(2, 1.0, 0.8).unwrap();
        let m = sc.vertices.len();
        let v: Vec<f64> = (0..m).map(|i| (i as f64 * 0.37).sin()).collect();
        let k = Mat::outer(&v);
        let xs: Vec<Vec<f64>> = sc.vertices.points().to_vec();
        let l = lift_kernel(&k, &sc, &xs, 1e-8).unwrap();
        assert!(l.as_slice().iter().zip(k.as_slice()).all(|(a, b)| (a - b).abs() < 1e-14));
        let ys = vec![vec![0.1, 0.2], vec![0.9, 0.35], vec![0.5, 0.5]];
        let l = lift_kernel(&k, &sc, &ys, 1e-8).unwrap();
        let lv: Vec<f64> = ys
            .iter()
            .map(|y| sc.barycentric_locate(y).unwrap().support(&sc).map(|(i, w)| w * v[i]).sum())
            .collect();
        let expect = Mat::outer(&lv);
        assert!(l.as_slice().iter().zip(expect.as_slice()).all(|(a, b)| (a - b).abs() < 1e-12));
        let neg = Mat::scaled_identity(m, -1.0);
        assert!(matches!(lift_kernel(&neg, &sc, &ys, 1e-8), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn lifted_random_psd_kernels_stay_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..=3 {
            let sc = triangulate_box(n, 1.0, 0.9).unwrap();
            let m = sc.vertices.len();
            let b = Mat::from_fn(m, |_, _| rng.gen_range(-1.0..1.0));
            let k = b.matmul(&b.transpose());
            let xs: Vec<Vec<f64>> = (0..50).map(|_| (0..n).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
            let l = lift_kernel(&k, &sc, &xs, 1e-8).unwrap();
            assert!(l.min_eigenvalue() >= -1e-8);
        }
    }
}
