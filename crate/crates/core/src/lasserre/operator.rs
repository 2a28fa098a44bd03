use super::family::{IndependentSetFamily, MomentVector};
use crate::linalg::Mat;

/// For each ordered pair (J, J′) of `ft`, the position of J ∪ J′ in `f2t`.
pub(crate) fn union_table(ft: &IndependentSetFamily, f2t: &IndependentSetFamily) -> Vec<Option<usize>> {
    let sets = ft.sets();
    let m = sets.len();
    let mut out = Vec::with_capacity(m * m);
    for a in sets {
        for b in sets {
            out.push(f2t.union_position(a, b));
        }
    }
    out
}

/// A_t K: for each S of `f2t`, the sum of K(J, J′) over ordered pairs of
/// `ft` with J ∪ J′ = S.
pub fn at_operator(ft: &IndependentSetFamily, f2t: &IndependentSetFamily, k: &Mat) -> Vec<f64> {
    assert_eq!(k.order(), ft.len(), "kernel order must match the family");
    let m = ft.len();
    let mut out = vec![0.0; f2t.len()];
    for (idx, pos) in union_table(ft, f2t).into_iter().enumerate() {
        if let Some(s) = pos {
            out[s] += k[(idx / m, idx % m)];
        }
    }
    out
}

/// A_t* λ: the matrix on `ft` with entry λ(J ∪ J′), zero when the union is
/// not in the family of `mv`.
pub fn at_adjoint_matrix(mv: &MomentVector, ft: &IndependentSetFamily) -> Mat {
    let m = ft.len();
    let table = union_table(ft, &mv.family);
    Mat::from_fn(m, |i, j| table[i * m + j].map_or(0.0, |s| mv.values[s]))
}
