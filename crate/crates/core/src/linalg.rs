//! Dense linear algebra used by the SDP solver and the PSD checks.
//!
//! Everything here works on square row-major matrices. The routines are
//! deliberately small: Cholesky, triangular solves, products, and a
//! symmetric eigenvalue solver (Householder tridiagonalization followed
//! by implicit QL).

use std::fmt;
use std::ops::{Index, IndexMut};

/// Square row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Mat {
    n: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat({}x{})", self.n, self.n)?;
        for i in 0..self.n.min(8) {
            writeln!(f, "  {:?}", &self.row(i)[..self.n.min(8)])?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m[(i, i)] = s;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Mat { n, data }
    }

    /// Builds a matrix from nested rows. Panics if the rows are not square.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        Mat::from_fn(n, |i, j| rows[i][j])
    }

    /// Rank-one matrix v vᵀ.
    pub fn outer(v: &[f64]) -> Self {
        Mat::from_fn(v.len(), |i, j| v[i] * v[j])
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// (A + Aᵀ)/2
    pub fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let v = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = v;
                self[(j, i)] = v;
            }
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &Mat) -> f64 {
        debug_assert_eq!(self.n, other.n);
        dot(&self.data, &other.data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    /// self += s * other
    pub fn axpy(&mut self, s: f64, other: &Mat) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn add_diagonal(&mut self, s: f64) {
        for i in 0..self.n {
            self[(i, i)] += s;
        }
    }

    /// Matrix product self * other.
    pub fn matmul(&self, other: &Mat) -> Mat {
        let n = self.n;
        debug_assert_eq!(n, other.n);
        let mut out = Mat::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), v)).collect()
    }

    /// Principal submatrix on the given index list.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    /// Smallest eigenvalue of the symmetric part.
    pub fn min_eigenvalue(&self) -> f64 {
        if self.n == 0 {
            return f64::INFINITY;
        }
        symmetric_eigenvalues(self)[0]
    }
}

/// Dot product with four independent accumulators so the loop vectorizes.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    let chunks = n / 4;
    let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
    for c in 0..chunks {
        let i = 4 * c;
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    let mut s = (s0 + s1) + (s2 + s3);
    for i in 4 * chunks..n {
        s += a[i] * b[i];
    }
    s
}

/// Error raised when a matrix is not numerically positive definite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotPositiveDefinite {
    pub pivot: usize,
    pub value: f64,
}

/// Lower Cholesky factor L with A = L Lᵀ. The strict upper triangle of the
/// returned matrix is zero.
pub fn cholesky(a: &Mat) -> Result<Mat, NotPositiveDefinite> {
    let n = a.order();
    let mut l = Mat::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let s = {
                let (li, lj) = (&l.data[i * n..i * n + j], &l.data[j * n..j * n + j]);
                dot(li, lj)
            };
            let v = a[(i, j)] - s;
            if i == j {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(NotPositiveDefinite { pivot: i, value: v });
                }
                l.data[i * n + i] = v.sqrt();
            } else {
                l.data[i * n + j] = v / l.data[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Solves L x = b in place for lower-triangular L.
pub fn forward_substitute(l: &Mat, b: &mut [f64]) {
    let n = l.order();
    for i in 0..n {
        let s = dot(&l.row(i)[..i], &b[..i]);
        b[i] = (b[i] - s) / l[(i, i)];
    }
}

/// Solves Lᵀ x = b in place for lower-triangular L.
pub fn backward_substitute(l: &Mat, b: &mut [f64]) {
    let n = l.order();
    for i in (0..n).rev() {
        let bi = b[i] / l[(i, i)];
        b[i] = bi;
        let row = l.row(i);
        for k in 0..i {
            b[k] -= row[k] * bi;
        }
    }
}

/// Solves A x = b given the Cholesky factor of A.
pub fn cholesky_solve(l: &Mat, b: &[f64]) -> Vec<f64> {
    let mut x = b.to_vec();
    forward_substitute(l, &mut x);
    backward_substitute(l, &mut x);
    x
}

/// Inverse of a lower-triangular matrix.
pub fn lower_triangular_inverse(l: &Mat) -> Mat {
    let n = l.order();
    let mut inv = Mat::zeros(n);
    for j in 0..n {
        inv[(j, j)] = 1.0 / l[(j, j)];
        for i in (j + 1)..n {
            let mut s = 0.0;
            for k in j..i {
                s += l[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -s / l[(i, i)];
        }
    }
    inv
}

/// A⁻¹ from the Cholesky factor: L⁻ᵀ L⁻¹.
pub fn cholesky_inverse(l: &Mat) -> Mat {
    let n = l.order();
    let li = lower_triangular_inverse(l);
    // (L⁻¹)ᵀ L⁻¹, exploiting the triangular structure of L⁻¹.
    let mut out = Mat::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = 0.0;
            for k in i..n {
                s += li[(k, i)] * li[(k, j)];
            }
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    out
}

/// L⁻¹ B L⁻ᵀ for lower-triangular L.
pub fn congruence_inverse(l: &Mat, b: &Mat) -> Mat {
    let n = l.order();
    // Y = L⁻¹ B (solve column by column, working on the transposed rows).
    let bt = b.transpose();
    let mut y_t = Mat::zeros(n);
    for j in 0..n {
        let mut col = bt.row(j).to_vec();
        forward_substitute(l, &mut col);
        y_t.row_mut(j).copy_from_slice(&col);
    }
    // Result = Y L⁻ᵀ = (L⁻¹ Yᵀ)ᵀ
    let y = y_t.transpose();
    let mut out = Mat::zeros(n);
    for i in 0..n {
        let mut row = y.row(i).to_vec();
        forward_substitute(l, &mut row);
        out.row_mut(i).copy_from_slice(&row);
    }
    out.symmetrize();
    out
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// Returns (diagonal, off-diagonal) with `off[0]` unused.
fn tridiagonalize(a: &Mat) -> (Vec<f64>, Vec<f64>) {
    let n = a.order();
    let mut m = a.clone();
    m.symmetrize();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| m[(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = m[(i, l)];
            } else {
                for k in 0..=l {
                    m[(i, k)] /= scale;
                    h += m[(i, k)] * m[(i, k)];
                }
                let f = m[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                m[(i, l)] = f - g;
                let mut ff = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += m[(j, k)] * m[(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g += m[(k, j)] * m[(i, k)];
                    }
                    e[j] = g / h;
                    ff += e[j] * m[(i, j)];
                }
                let hh = ff / (h + h);
                for j in 0..=l {
                    let f = m[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let v = m[(j, k)] - (f * e[k] + g * m[(i, k)]);
                        m[(j, k)] = v;
                    }
                }
            }
        } else {
            e[i] = m[(i, l)];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = m[(i, i)];
    }
    (d, e)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n == 0 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// All eigenvalues of the symmetric part of `a`, ascending.
pub fn symmetric_eigenvalues(a: &Mat) -> Vec<f64> {
    let (mut d, mut e) = tridiagonalize(a);
    tridiagonal_ql(&mut d, &mut e);
    d.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    d
}

/// Eigen-decomposition by cyclic Jacobi rotations: (eigenvalues ascending,
/// eigenvectors as columns of the returned matrix). Intended for the small
/// matrices used in certificates and reports.
pub fn symmetric_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    let n = a.order();
    let mut m = a.clone();
    m.symmetrize();
    let mut v = Mat::identity(n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        if off.sqrt() <= 1e-15 * (1.0 + m.max_abs()) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    let vals = order.iter().map(|&i| m[(i, i)]).collect();
    let vecs = Mat::from_fn(n, |r, c| v[(r, order[c])]);
    (vals, vecs)
}

/// Solves a general square system by Gaussian elimination with partial
/// pivoting. Returns `None` for a (numerically) singular matrix.
pub fn solve_general(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut x = b.to_vec();
    let scale = m.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs())).max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[piv][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, piv);
        x.swap(col, piv);
        for r in (col + 1)..n {
            let f = m[r][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            let (upper, lower) = m.split_at_mut(r);
            for (a, b) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *a -= f * b;
            }
            x[r] -= f * x[col];
        }
    }
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (x[i] - s) / m[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> Mat {
        let b = Mat::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let mut a = b.matmul(&b.transpose());
        a.add_diagonal(0.5);
        a
    }

    #[test]
    fn cholesky_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_spd(9, &mut rng);
        let l = cholesky(&a).unwrap();
        let back = l.matmul(&l.transpose());
        for i in 0..9 {
            for j in 0..9 {
                assert!((back[(i, j)] - a[(i, j)]).abs() < 1e-12);
            }
        }
        let inv = cholesky_inverse(&l);
        let id = inv.matmul(&a);
        for i in 0..9 {
            for j in 0..9 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - e).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(cholesky(&a).is_err());
    }

    #[test]
    fn eigenvalues_of_known_matrices() {
        let a = Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let ev = symmetric_eigenvalues(&a);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
        // Path P4 adjacency: 2cos(kπ/5)
        let p4 = Mat::from_fn(4, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
        let mut expect: Vec<f64> = (1..=4).map(|k| 2.0 * (k as f64 * std::f64::consts::PI / 5.0).cos()).collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in symmetric_eigenvalues(&p4).iter().zip(&expect) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn eigen_solvers_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 5, 13] {
            let a = Mat::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            let mut a = a.clone();
            a.symmetrize();
            let ql = symmetric_eigenvalues(&a);
            let (jac, vecs) = symmetric_eigen(&a);
            for (x, y) in ql.iter().zip(&jac) {
                assert!((x - y).abs() < 1e-11, "{x} vs {y}");
            }
            // A v = λ v
            for c in 0..n {
                let v: Vec<f64> = (0..n).map(|r| vecs[(r, c)]).collect();
                let av = a.matvec(&v);
                for r in 0..n {
                    assert!((av[r] - jac[c] * v[r]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn congruence_matches_explicit_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_spd(6, &mut rng);
        let mut b = Mat::from_fn(6, |_, _| rng.gen_range(-1.0..1.0));
        b.symmetrize();
        let l = cholesky(&a).unwrap();
        let li = lower_triangular_inverse(&l);
        let explicit = li.matmul(&b).matmul(&li.transpose());
        let fast = congruence_inverse(&l, &b);
        for i in 0..6 {
            for j in 0..6 {
                assert!((explicit[(i, j)] - fast[(i, j)]).abs() < 1e-10);
            }
        }
    }

    fn to_nalgebra(a: &Mat) -> nalgebra::DMatrix<f64> {
        let n = a.order();
        nalgebra::DMatrix::from_fn(n, n, |i, j| a[(i, j)])
    }

    proptest::proptest! {
        #[test]
        fn eigenvalues_match_nalgebra(n in 1usize..16, seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut a = Mat::from_fn(n, |_, _| rng.gen_range(-2.0..2.0));
            a.symmetrize();
            let mut oracle: Vec<f64> = nalgebra::SymmetricEigen::new(to_nalgebra(&a)).eigenvalues.iter().copied().collect();
            oracle.sort_by(f64::total_cmp);
            for (x, y) in symmetric_eigenvalues(&a).iter().zip(&oracle) {
                proptest::prop_assert!((x - y).abs() < 1e-10, "{} vs {}", x, y);
            }
            proptest::prop_assert!((a.min_eigenvalue() - oracle[0]).abs() < 1e-10);
        }

        #[test]
        fn cholesky_solve_matches_nalgebra(n in 1usize..16, seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_spd(n, &mut rng);
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = cholesky_solve(&cholesky(&a).unwrap(), &b);
            let oracle = to_nalgebra(&a).cholesky().unwrap().solve(&nalgebra::DVector::from_vec(b));
            for (u, v) in x.iter().zip(oracle.iter()) {
                proptest::prop_assert!((u - v).abs() < 1e-9 * (1.0 + v.abs()));
            }
        }
    }

    #[test]
    fn general_solve() {
        let a = vec![vec![0.0, 2.0], vec![3.0, 1.0]];
        let x = solve_general(&a, &[4.0, 5.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
        assert!(solve_general(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0]).is_none());
    }
}
