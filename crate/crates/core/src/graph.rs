//! Finite loopless graphs, the join/union/complement operations, and the
//! exact invariants α, ω, χ.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Caps;
use crate::error::{check_cap, Error, Result};

/// Fixed-width bitset over vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(n: usize) -> Self {
        Bitset {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut b = Bitset::new(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect(&self, other: &Bitset) -> Bitset {
        Bitset {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, other: &Bitset) -> Bitset {
        Bitset {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(64 * k + t)
            })
        })
    }
}

/// Finite loopless undirected graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Bitset>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Graph> {
        let g = Graph::new(r.n, &r.edges)?;
        match r.labels {
            Some(l) => g.with_labels(l),
            None => Ok(g),
        }
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> GraphRepr {
        GraphRepr {
            n: g.n,
            edges: g.edges,
            labels: g.labels,
        }
    }
}

impl Graph {
    /// Builds a graph; pairs are normalized to i < j and duplicates merged.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!("edge ({i}, {j}) out of range for {n} vertices")));
            }
            if i == j {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {i}")));
            }
            norm.push((i.min(j), i.max(j)));
        }
        norm.sort_unstable();
        norm.dedup();
        let mut adj = vec![Bitset::new(n); n];
        for &(i, j) in &norm {
            adj[i].insert(j);
            adj[j].insert(i);
        }
        Ok(Graph {
            n,
            edges: norm,
            adj,
            labels: None,
        })
    }

    fn from_adjacency(n: usize, has_edge: impl Fn(usize, usize) -> bool) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| has_edge(i, j))
            .collect();
        Graph::new(n, &edges).expect("generated edges are valid")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidArgument("label count differs from vertex count".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn empty(n: usize) -> Self {
        Graph::from_adjacency(n, |_, _| false)
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_adjacency(n, |_, _| true)
    }

    pub fn cycle(n: usize) -> Self {
        Graph::from_adjacency(n, |i, j| j == i + 1 || (i == 0 && j + 1 == n && n > 2))
    }

    pub fn path(n: usize) -> Self {
        Graph::from_adjacency(n, |i, j| j == i + 1)
    }

    /// Erdős–Rényi G(n, p).
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(n, &edges).expect("generated edges are valid")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn neighbors(&self, i: usize) -> &Bitset {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count()
    }

    /// Pairs i < j that are not edges.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.has_edge(i, j))
            .collect()
    }

    pub fn complement(&self) -> Graph {
        Graph::from_adjacency(self.n, |i, j| !self.has_edge(i, j))
    }

    /// Disjoint union with every cross pair joined by an edge.
    pub fn join(&self, other: &Graph) -> Graph {
        let mut g = self.disjoint_union(other);
        let mut edges = g.edges.clone();
        for i in 0..self.n {
            for j in 0..other.n {
                edges.push((i, self.n + j));
            }
        }
        let labels = g.labels.take();
        let mut out = Graph::new(self.n + other.n, &edges).expect("valid edges");
        out.labels = labels;
        out
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(i, j)| (i + self.n, j + self.n)));
        let mut g = Graph::new(self.n + other.n, &edges).expect("valid edges");
        if let (Some(a), Some(b)) = (&self.labels, &other.labels) {
            g.labels = Some(a.iter().chain(b).cloned().collect());
        }
        g
    }

    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        Graph::from_adjacency(vertices.len(), |i, j| self.has_edge(vertices[i], vertices[j]))
    }

    /// Whether `set` (sorted vertex list) is independent.
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &u)| set[k + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    /// Hex SHA-256 of the vertex count and sorted edge list.
    pub fn structure_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n as u64).to_le_bytes());
        for &(i, j) in &self.edges {
            h.update((i as u64).to_le_bytes());
            h.update((j as u64).to_le_bytes());
        }
        h.finalize().iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// Parses "n m" followed by m lines "i j". Blank lines and lines
    /// starting with '#' are skipped.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let nums = parse_usizes(header, ln)?;
        let [n, m] = nums[..] else {
            return Err(Error::Parse {
                line: ln,
                message: "header must be \"n m\"".into(),
            });
        };
        let mut edges = Vec::with_capacity(m);
        for (ln, l) in lines {
            let v = parse_usizes(l, ln)?;
            let [i, j] = v[..] else {
                return Err(Error::Parse {
                    line: ln,
                    message: "edge line must be \"i j\"".into(),
                });
            };
            edges.push((i, j));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: 1,
                message: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, &edges).map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for &(i, j) in &self.edges {
            let _ = writeln!(s, "{i} {j}");
        }
        s
    }
}

fn parse_usizes(line: &str, ln: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: ln,
                message: format!("expected a non-negative integer, got {t:?}"),
            })
        })
        .collect()
}

/// Maximum clique by branch and bound with greedy-coloring bounds
/// (Tomita–Seki style). Returns the vertices of one maximum clique.
fn max_clique(adj: &[Bitset], n: usize) -> Vec<usize> {
    // Initial order: non-increasing degree.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].count()));
    let mut best: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();

    fn color_sort(adj: &[Bitset], cand: &[usize]) -> (Vec<usize>, Vec<usize>) {
        // Greedy sequential coloring; returns vertices sorted by color and
        // their colors.
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            match classes.iter_mut().find(|c| c.iter().all(|&u| !adj[v].contains(u))) {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut verts = Vec::with_capacity(cand.len());
        let mut colors = Vec::with_capacity(cand.len());
        for (k, c) in classes.into_iter().enumerate() {
            for v in c {
                verts.push(v);
                colors.push(k + 1);
            }
        }
        (verts, colors)
    }

    fn expand(adj: &[Bitset], cand: Vec<usize>, current: &mut Vec<usize>, best: &mut Vec<usize>) {
        let (verts, colors) = color_sort(adj, &cand);
        let mut remaining: Vec<usize> = verts.clone();
        for idx in (0..verts.len()).rev() {
            if current.len() + colors[idx] <= best.len() {
                return;
            }
            let v = verts[idx];
            current.push(v);
            let next: Vec<usize> = remaining.iter().copied().filter(|&u| u != v && adj[v].contains(u)).collect();
            if next.is_empty() {
                if current.len() > best.len() {
                    *best = current.clone();
                }
            } else {
                expand(adj, next, current, best);
            }
            current.pop();
            remaining.retain(|&u| u != v);
        }
    }

    if n > 0 {
        expand(adj, order, &mut current, &mut best);
    }
    best.sort_unstable();
    best
}

/// A maximum independent set.
pub fn maximum_independent_set(g: &Graph, caps: &Caps) -> Result<Vec<usize>> {
    check_cap("independence number", g.n, caps.independence)?;
    let c = g.complement();
    Ok(max_clique(&c.adj, c.n))
}

/// α(G), exact.
pub fn independence_number(g: &Graph, caps: &Caps) -> Result<usize> {
    maximum_independent_set(g, caps).map(|s| s.len())
}

/// ω(G) = α(Ḡ).
pub fn clique_number(g: &Graph, caps: &Caps) -> Result<usize> {
    independence_number(&g.complement(), caps)
}

/// Proper coloring with DSATUR greedy; returns colors 0..k.
fn dsatur_greedy(g: &Graph) -> Vec<usize> {
    let n = g.n;
    let mut color = vec![usize::MAX; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| {
                let mut seen: Vec<usize> = g.adj[v].iter().map(|u| color[u]).filter(|&c| c != usize::MAX).collect();
                seen.sort_unstable();
                seen.dedup();
                (seen.len(), g.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        let used: Vec<usize> = g.adj[v].iter().map(|u| color[u]).collect();
        color[v] = (0..).find(|c| !used.contains(c)).unwrap();
    }
    color
}

/// Exact k-colorability test by DSATUR-ordered backtracking.
fn k_colorable(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let n = g.n;
    let mut color = vec![usize::MAX; n];

    fn rec(g: &Graph, k: usize, color: &mut Vec<usize>, colored: usize) -> bool {
        let n = g.n;
        if colored == n {
            return true;
        }
        // Pick the uncolored vertex with the most distinct neighbor colors.
        let mut pick = usize::MAX;
        let mut pick_key = (0usize, 0usize);
        let mut pick_forbidden = 0u64;
        for v in 0..n {
            if color[v] != usize::MAX {
                continue;
            }
            let mut forb = 0u64;
            for u in g.adj[v].iter() {
                if color[u] != usize::MAX {
                    forb |= 1 << color[u];
                }
            }
            let key = (forb.count_ones() as usize, g.degree(v));
            if pick == usize::MAX || key > pick_key {
                pick = v;
                pick_key = key;
                pick_forbidden = forb;
            }
        }
        // Symmetry breaking: never open more than one new color.
        let max_used = color.iter().filter(|&&c| c != usize::MAX).max().map_or(0, |&c| c + 1);
        for c in 0..k.min(max_used + 1) {
            if pick_forbidden >> c & 1 == 1 {
                continue;
            }
            color[pick] = c;
            if rec(g, k, color, colored + 1) {
                return true;
            }
            color[pick] = usize::MAX;
        }
        false
    }

    if rec(g, k, &mut color, 0) {
        Some(color)
    } else {
        None
    }
}

/// An optimal proper coloring (colors 0..χ).
pub fn optimal_coloring(g: &Graph, caps: &Caps) -> Result<Vec<usize>> {
    check_cap("chromatic number", g.n, caps.chromatic)?;
    if g.n == 0 {
        return Ok(Vec::new());
    }
    let greedy = dsatur_greedy(g);
    let mut hi = greedy.iter().max().unwrap() + 1;
    let mut best = greedy;
    let mut lo = clique_number(g, caps)?;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match k_colorable(g, mid) {
            Some(c) => {
                hi = mid;
                best = c;
            }
            None => lo = mid + 1,
        }
    }
    Ok(best)
}

/// χ(G), exact.
pub fn chromatic_number(g: &Graph, caps: &Caps) -> Result<usize> {
    Ok(optimal_coloring(g, caps)?.iter().max().map_or(0, |c| c + 1))
}

/// A graph homomorphism source → target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphHom {
    pub source: Graph,
    pub target: Graph,
    pub map: Vec<usize>,
}

impl GraphHom {
    pub fn is_valid(&self) -> bool {
        self.map.len() == self.source.n
            && self.map.iter().all(|&v| v < self.target.n)
            && self
                .source
                .edges
                .iter()
                .all(|&(u, v)| self.map[u] != self.map[v] && self.target.has_edge(self.map[u], self.map[v]))
    }
}

/// Exhaustive backtracking search, vertices and targets in increasing order.
pub fn find_homomorphism(g: &Graph, h: &Graph, caps: &Caps) -> Result<Option<GraphHom>> {
    check_cap("homomorphism source", g.n, caps.homomorphism)?;
    check_cap("homomorphism target", h.n, caps.homomorphism)?;

    fn rec(g: &Graph, h: &Graph, map: &mut Vec<usize>) -> bool {
        let u = map.len();
        if u == g.n {
            return true;
        }
        for t in 0..h.n {
            let ok = g.adj[u].iter().filter(|&w| w < u).all(|w| h.has_edge(map[w], t));
            if ok {
                map.push(t);
                if rec(g, h, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }

    let mut map = Vec::with_capacity(g.n);
    Ok(rec(g, h, &mut map).then(|| GraphHom {
        source: g.clone(),
        target: h.clone(),
        map,
    }))
}
