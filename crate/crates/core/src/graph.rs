//! Simple undirected graphs stored as adjacency bitsets.
//!
//! Vertices are dense ids `0..n`. Every row of the adjacency matrix is a run of
//! `u64` words, so neighbourhood intersections and popcounts are the hot
//! primitive for everything built on top of this module.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default vertex cap for [`Graph::complement`].
pub const COMPLEMENT_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("endpoint {endpoint} out of range for {n} vertices")]
    OutOfRange { endpoint: usize, n: usize },
    #[error("graph has {n} vertices, above the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Iterates the set bits of a word slice in ascending order.
pub(crate) fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            }
        })
    })
}

/// A set of vertices of some host graph.
///
/// Trailing zero words are always trimmed, so two sets holding the same
/// vertices compare equal regardless of how they were built.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The set `{0, .., n-1}`.
    pub fn range(n: usize) -> Self {
        let mut words = vec![u64::MAX; words_for(n)];
        if !n.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (n % 64)) - 1;
            }
        }
        Self::from_words(words)
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = Self::new();
        s.insert(v);
        s
    }

    pub fn from_words(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        Self { words }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn insert(&mut self, v: usize) {
        let w = v / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1u64 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        let w = v / 64;
        if w < self.words.len() {
            self.words[w] &= !(1u64 << (v % 64));
            self.trim();
        }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words
            .get(v / 64)
            .is_some_and(|w| w & (1u64 << (v % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        bits(&self.words).next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        bits(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, o) in words.iter_mut().zip(&short.words) {
            *w |= o;
        }
        VertexSet { words }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        Self::from_words(
            self.words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        )
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        Self::from_words(
            self.words
                .iter()
                .enumerate()
                .map(|(i, a)| a & !other.words.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }

    /// Intersection with a raw adjacency row.
    pub fn intersect_row(&self, row: &[u64]) -> VertexSet {
        Self::from_words(self.words.iter().zip(row).map(|(a, b)| a & b).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, a)| a & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        Ok(v.into_iter().collect())
    }
}

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        let stride = words_for(n);
        Graph {
            n,
            stride,
            rows: vec![0; n * stride],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for e in [u, v] {
            if e >= self.n {
                return Err(GraphError::OutOfRange {
                    endpoint: e,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.set(u, v);
        self.set(v, u);
        Ok(())
    }

    /// Adds `uv`. Panics on loops or out-of-range endpoints.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.try_add_edge(u, v).expect("invalid edge");
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.rows[u * self.stride + v / 64] &= !(1u64 << (v % 64));
            self.rows[v * self.stride + u / 64] &= !(1u64 << (u % 64));
        }
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.rows[u * self.stride + v / 64] |= 1u64 << (v % 64);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of `u64` words per adjacency row.
    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    /// Raw adjacency row of `v`.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.stride + v / 64] & (1u64 << (v % 64)) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(v))
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.row(v).to_vec())
    }

    /// `N[v]`.
    pub fn closed_neighbor_set(&self, v: usize) -> VertexSet {
        let mut s = self.neighbor_set(v);
        s.insert(v);
        s
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::range(self.n)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n).all(|v| self.degree(v) + 1 == self.n)
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        let vs = s.to_vec();
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_stable(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| s.intersect_row(self.row(v)).is_empty())
    }

    /// Complement, refused above [`COMPLEMENT_CAP`] vertices.
    pub fn complement(&self) -> Result<Graph, GraphError> {
        self.complement_with_cap(COMPLEMENT_CAP)
    }

    pub fn complement_with_cap(&self, cap: usize) -> Result<Graph, GraphError> {
        if self.n > cap {
            return Err(GraphError::CapExceeded { n: self.n, cap });
        }
        let mut c = Graph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    c.add_edge(u, v);
                }
            }
        }
        Ok(c)
    }

    /// Subgraph induced by `s`, relabelled `0..|s|` in ascending order of the
    /// original ids. The second value maps new ids back to old ones.
    pub fn induced(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let map: Vec<usize> = s.iter().filter(|&v| v < self.n).collect();
        (self.induced_ordered(&map), map)
    }

    /// Subgraph induced by `order`, where new vertex `i` is `order[i]`.
    pub fn induced_ordered(&self, order: &[usize]) -> Graph {
        let mut g = Graph::new(order.len());
        for (i, &u) in order.iter().enumerate() {
            for (j, &v) in order.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Connected components within `within`, each sorted, listed by least vertex.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut left = within.clone();
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp.clone();
            while !frontier.is_empty() {
                let mut next = VertexSet::new();
                for v in frontier.iter() {
                    next = next.union(&left.intersect_row(self.row(v)));
                }
                frontier = next.difference(&comp);
                comp = comp.union(&frontier);
            }
            left = left.difference(&comp);
            out.push(comp);
        }
        out
    }

    /// Partition of `V(G)` into connected components, sorted by least vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertices())
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Classes of true twins (equal closed neighbourhoods), each sorted,
    /// listed by least vertex.
    pub fn true_twin_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of: Vec<Option<usize>> = vec![None; self.n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.n {
            if class_of[v].is_some() {
                continue;
            }
            let id = classes.len();
            let nv = self.closed_neighbor_set(v);
            let mut class = vec![v];
            class_of[v] = Some(id);
            for u in self.neighbors(v).filter(|&u| u > v) {
                if class_of[u].is_none() && self.closed_neighbor_set(u) == nv {
                    class_of[u] = Some(id);
                    class.push(u);
                }
            }
            classes.push(class);
        }
        classes
    }

    /// Disjoint union, `other` shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = Graph::new(self.n + other.n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n);
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

/// Clique blowup of `h` where vertex `v` becomes a clique of `sizes[v]` vertices.
/// Returns the graph and, per vertex of `h`, the ids of its bag.
pub fn blowup(h: &Graph, sizes: &[usize]) -> (Graph, Vec<Vec<usize>>) {
    assert_eq!(sizes.len(), h.n());
    let mut bags = Vec::with_capacity(h.n());
    let mut next = 0;
    for &s in sizes {
        bags.push((next..next + s).collect::<Vec<_>>());
        next += s;
    }
    let mut g = Graph::new(next);
    for bag in &bags {
        for (i, &a) in bag.iter().enumerate() {
            for &b in &bag[i + 1..] {
                g.add_edge(a, b);
            }
        }
    }
    for (u, v) in h.edges() {
        for &a in &bags[u] {
            for &b in &bags[v] {
                g.add_edge(a, b);
            }
        }
    }
    (g, bags)
}

/// Uniform `k`-clique blowup.
pub fn uniform_blowup(h: &Graph, k: usize) -> Graph {
    blowup(h, &vec![k; h.n()]).0
}
