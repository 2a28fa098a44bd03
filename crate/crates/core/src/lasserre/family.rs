use std::collections::HashMap;

use serde::Serialize;

use crate::error::{check_cap, Result};
use crate::graph::Graph;

/// All independent sets of size at most `t`, ordered by (size, lex) with
/// ∅ at position 0.
#[derive(Debug, Clone, Serialize)]
pub struct IndependentSetFamily {
    #[serde(skip)]
    base: Graph,
    t: usize,
    sets: Vec<Vec<usize>>,
    #[serde(skip)]
    index: HashMap<Vec<usize>, usize>,
    /// `level_end[k]` is one past the last set of size k.
    level_end: Vec<usize>,
}

impl IndependentSetFamily {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn position(&self, set: &[usize]) -> Option<usize> {
        self.index.get(set).copied()
    }

    /// Number of sets of size at most k.
    pub fn count_up_to(&self, k: usize) -> usize {
        self.level_end[k.min(self.t)]
    }

    /// Positions of the sets of size exactly k.
    pub fn of_size(&self, k: usize) -> std::ops::Range<usize> {
        if k > self.t {
            return self.len()..self.len();
        }
        let lo = if k == 0 { 0 } else { self.level_end[k - 1] };
        lo..self.level_end[k]
    }

    /// Position of J ∪ J′ when it belongs to the family.
    pub fn union_position(&self, a: &[usize], b: &[usize]) -> Option<usize> {
        self.position(&sorted_union(a, b))
    }
}

pub(crate) fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
            j += 1;
        }
    }
    out
}

/// Level-by-level extension: each set of size k grows by a vertex above its
/// maximum that has no neighbor in it, which keeps lexicographic order.
pub fn enumerate_independent_sets(g: &Graph, t: usize, cap: usize) -> Result<IndependentSetFamily> {
    let mut sets: Vec<Vec<usize>> = vec![Vec::new()];
    let mut level_end = vec![1];
    let mut frontier = 0..1;
    for _ in 0..t {
        let mut next = Vec::new();
        for s in &sets[frontier.clone()] {
            let lo = s.last().map_or(0, |&m| m + 1);
            for v in lo..g.n() {
                if s.iter().all(|&u| !g.has_edge(u, v)) {
                    let mut e = s.clone();
                    e.push(v);
                    next.push(e);
                    check_cap("independent set family", sets.len() + next.len(), cap)?;
                }
            }
        }
        let start = sets.len();
        sets.extend(next);
        frontier = start..sets.len();
        level_end.push(sets.len());
    }
    let index = sets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Ok(IndependentSetFamily {
        base: g.clone(),
        t,
        sets,
        index,
        level_end,
    })
}

/// A real value on every set of a level-2t family.
#[derive(Debug, Clone, Serialize)]
pub struct MomentVector {
    pub family: IndependentSetFamily,
    pub values: Vec<f64>,
}

impl MomentVector {
    pub fn get(&self, set: &[usize]) -> Option<f64> {
        self.family.position(set).map(|i| self.values[i])
    }

    /// Sum over singletons, the objective of the moment programs.
    pub fn singleton_mass(&self) -> f64 {
        self.family.of_size(1).map(|i| self.values[i]).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Caps;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_count(g: &Graph, t: usize) -> usize {
        (0u32..1 << g.n())
            .filter(|m| m.count_ones() as usize <= t)
            .filter(|&m| {
                let s: Vec<usize> = (0..g.n()).filter(|&i| m >> i & 1 == 1).collect();
                g.is_independent(&s)
            })
            .count()
    }

    #[test]
    fn examples() {
        let p3 = Graph::path(3);
        let f = enumerate_independent_sets(&p3, 2, 100).unwrap();
        assert_eq!(f.sets(), &[vec![], vec![0], vec![1], vec![2], vec![0, 2]]);
        for n in 1..6 {
            for t in 1..4 {
                assert_eq!(enumerate_independent_sets(&Graph::complete(n), t, 100).unwrap().len(), n + 1);
            }
            assert_eq!(enumerate_independent_sets(&Graph::empty(n), 2, 100).unwrap().len(), 1 + n + n * (n - 1) / 2);
        }
        assert!(enumerate_independent_sets(&Graph::empty(12), 3, 100).is_err());
    }

    #[test]
    fn levels_and_lookup() {
        let f = enumerate_independent_sets(&Graph::cycle(5), 2, 100).unwrap();
        assert_eq!(f.of_size(0), 0..1);
        assert_eq!(f.of_size(1), 1..6);
        assert_eq!(f.of_size(2), 6..11);
        assert_eq!(f.of_size(3), 11..11);
        assert_eq!(f.count_up_to(1), 6);
        assert_eq!(f.union_position(&[0], &[2]), Some(6));
        assert_eq!(f.union_position(&[0], &[1]), None);
        assert_eq!(sorted_union(&[1, 4], &[0, 4, 7]), vec![0, 1, 4, 7]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(seed in 0u64..1000, n in 0usize..=12, p in 0.0f64..1.0, t in 0usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = Graph::random(n, p, &mut rng);
            let f = enumerate_independent_sets(&g, t, Caps::default().enumeration).unwrap();
            prop_assert_eq!(f.len(), brute_count(&g, t));
            prop_assert!(f.sets()[0].is_empty());
            for w in f.sets().windows(2) {
                prop_assert!((w[0].len(), &w[0]) < (w[1].len(), &w[1]));
            }
            for s in f.sets() {
                prop_assert!(g.is_independent(s));
            }
        }
    }
}
