//! Clique-cutset decomposition, universal-clique peeling and recombination.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::Coloring;
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("input graph is disconnected ({0} components)")]
    Disconnected(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecombineError {
    #[error("expected {expected} leaf colorings, got {got}")]
    LeafCount { expected: usize, got: usize },
    #[error("coloring of leaf {leaf} is not proper on its atom")]
    InvalidLeaf { leaf: usize },
}

/// Binary tree of clique cutsets; vertex ids refer to the decomposed graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DecompositionTree {
    Split {
        cutset: VertexSet,
        left: Box<DecompositionTree>,
        right: Box<DecompositionTree>,
    },
    Atom {
        vertices: VertexSet,
    },
}

impl DecompositionTree {
    /// Atoms, left to right.
    pub fn leaves(&self) -> Vec<&VertexSet> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a VertexSet>) {
        match self {
            DecompositionTree::Atom { vertices } => out.push(vertices),
            DecompositionTree::Split { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    /// All vertices covered by the tree.
    pub fn vertices(&self) -> VertexSet {
        self.leaves()
            .into_iter()
            .fold(VertexSet::new(), |acc, l| acc.union(l))
    }

    pub fn split_count(&self) -> usize {
        match self {
            DecompositionTree::Atom { .. } => 0,
            DecompositionTree::Split { left, right, .. } => {
                1 + left.split_count() + right.split_count()
            }
        }
    }

    /// Maps every vertex through `map`.
    pub fn relabel(self, map: &[usize]) -> DecompositionTree {
        let tr = |s: VertexSet| s.iter().map(|v| map[v]).collect::<VertexSet>();
        match self {
            DecompositionTree::Atom { vertices } => DecompositionTree::Atom {
                vertices: tr(vertices),
            },
            DecompositionTree::Split { cutset, left, right } => DecompositionTree::Split {
                cutset: tr(cutset),
                left: Box::new(left.relabel(map)),
                right: Box::new(right.relabel(map)),
            },
        }
    }
}

/// Minimal elimination ordering by MCS-M.
struct Mcsm {
    /// `number[v]`: position in `0..n`; the vertex numbered 0 is eliminated first.
    number: Vec<usize>,
    /// Vertices in elimination order.
    order: Vec<usize>,
    /// Adjacency of the minimal triangulation.
    fill: Vec<VertexSet>,
    /// Generators of minimal separators.
    generators: VertexSet,
}

fn mcs_m(g: &Graph) -> Mcsm {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut numbered = vec![false; n];
    let mut number = vec![0usize; n];
    let mut order = vec![0usize; n];
    let mut fill: Vec<VertexSet> = (0..n).map(|v| g.neighbor_set(v)).collect();
    let mut generators = VertexSet::new();
    let mut prev: Option<usize> = None;
    for i in (0..n).rev() {
        let v = (0..n)
            .filter(|&u| !numbered[u])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("unnumbered vertex");
        if prev.is_some_and(|p| weight[v] <= p) {
            generators.insert(v);
        }
        prev = Some(weight[v]);
        numbered[v] = true;
        number[v] = i;
        order[i] = v;

        // bottleneck[u]: least possible maximum weight of an intermediate
        // vertex over unnumbered paths from v to u (None = unreached,
        // Some(None) = adjacent to v).
        let mut best: Vec<Option<Option<usize>>> = vec![None; n];
        let mut done = vec![false; n];
        for u in g.neighbors(v).filter(|&u| !numbered[u]) {
            best[u] = Some(None);
        }
        loop {
            let next = (0..n)
                .filter(|&u| !numbered[u] && !done[u] && best[u].is_some())
                .min_by_key(|&u| (best[u].unwrap().map_or(0, |w| w + 1), u));
            let Some(u) = next else { break };
            done[u] = true;
            let through = Some(best[u].unwrap().map_or(weight[u], |b| b.max(weight[u])));
            for x in g.neighbors(u) {
                if numbered[x] || done[x] {
                    continue;
                }
                let better = match best[x] {
                    None => true,
                    Some(cur) => cur.map_or(0, |w| w + 1) > through.map_or(0, |w| w + 1),
                };
                if better {
                    best[x] = Some(through);
                }
            }
        }
        let reached: Vec<usize> = (0..n)
            .filter(|&u| !numbered[u])
            .filter(|&u| match best[u] {
                None => false,
                Some(None) => true,
                Some(Some(b)) => b < weight[u],
            })
            .collect();
        for u in reached {
            weight[u] += 1;
            fill[u].insert(v);
            fill[v].insert(u);
        }
    }
    Mcsm {
        number,
        order,
        fill,
        generators,
    }
}

/// A clique whose removal disconnects `g`, or `None` when `g` is an atom.
///
/// Candidates are the later neighbourhoods of the generators of a minimal
/// elimination ordering, swept in elimination order; the first one that is a
/// clique of `g` and separates it is returned.
pub fn find_clique_cutset(g: &Graph) -> Result<Option<VertexSet>, DecomposeError> {
    let comps = g.components().len();
    if comps > 1 {
        return Err(DecomposeError::Disconnected(comps));
    }
    if g.n() < 3 {
        return Ok(None);
    }
    let m = mcs_m(g);
    for &x in &m.order {
        if !m.generators.contains(x) {
            continue;
        }
        let s: VertexSet = m.fill[x]
            .iter()
            .filter(|&u| m.number[u] > m.number[x])
            .collect();
        if s.is_empty() || !g.is_clique(&s) {
            continue;
        }
        let rest = g.vertices().difference(&s);
        if g.components_within(&rest).len() > 1 {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Recursive clique-cutset decomposition of a connected graph.
pub fn decompose(g: &Graph) -> Result<DecompositionTree, DecomposeError> {
    let Some(cut) = find_clique_cutset(g)? else {
        return Ok(DecompositionTree::Atom {
            vertices: g.vertices(),
        });
    };
    let rest = g.vertices().difference(&cut);
    let comps = g.components_within(&rest);
    // components are listed by least vertex, so min_by_key keeps the first on ties
    let small = comps
        .iter()
        .min_by_key(|c| c.len())
        .expect("cutset separates");
    // only the part of the cutset that touches the small side separates it
    let touching: VertexSet = cut
        .iter()
        .filter(|&k| small.iter().any(|v| g.has_edge(k, v)))
        .collect();
    let left_set = small.union(&touching);
    let right_set = g.vertices().difference(small);
    let (lg, lmap) = g.induced(&left_set);
    let (rg, rmap) = g.induced(&right_set);
    Ok(DecompositionTree::Split {
        cutset: touching,
        left: Box::new(decompose(&lg)?.relabel(&lmap)),
        right: Box::new(decompose(&rg)?.relabel(&rmap)),
    })
}

/// Universal cliques removed in order, and what remains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Peel {
    pub layers: Vec<VertexSet>,
    pub core: VertexSet,
    /// True when the layers consumed a complete graph (the core is then empty).
    pub core_complete: bool,
}

impl Peel {
    pub fn peeled(&self) -> usize {
        self.layers.iter().map(VertexSet::len).sum()
    }
}

/// Repeatedly strips the set of vertices adjacent to all other remaining
/// vertices (always a clique).
pub fn peel_universal(g: &Graph) -> Peel {
    let mut remaining = g.vertices();
    let mut layers = Vec::new();
    loop {
        if remaining.is_empty() {
            return Peel {
                layers,
                core: remaining,
                core_complete: true,
            };
        }
        let size = remaining.len();
        let universal: VertexSet = remaining
            .iter()
            .filter(|&v| remaining.intersect_row(g.row(v)).len() == size - 1)
            .collect();
        if universal.is_empty() {
            return Peel {
                layers,
                core: remaining,
                core_complete: false,
            };
        }
        remaining = remaining.difference(&universal);
        let all = remaining.is_empty();
        layers.push(universal);
        if all {
            return Peel {
                layers,
                core: remaining,
                core_complete: true,
            };
        }
    }
}

/// Merges per-atom colorings into a coloring of `g`. `leaf_colorings[i]`
/// colors the subgraph induced by the `i`-th leaf, vertices in ascending order.
pub fn recombine(
    g: &Graph,
    tree: &DecompositionTree,
    leaf_colorings: &[Coloring],
) -> Result<Coloring, RecombineError> {
    let leaves = tree.leaves();
    if leaves.len() != leaf_colorings.len() {
        return Err(RecombineError::LeafCount {
            expected: leaves.len(),
            got: leaf_colorings.len(),
        });
    }
    for (i, (leaf, c)) in leaves.iter().zip(leaf_colorings).enumerate() {
        let (lg, _) = g.induced(leaf);
        if c.len() != lg.n() || !c.is_proper(&lg) {
            return Err(RecombineError::InvalidLeaf { leaf: i });
        }
    }
    let mut next = 0;
    let colors = merge(tree, leaf_colorings, &mut next, g.n());
    Ok(Coloring::from_colors(
        colors.into_iter().map(|c| c.unwrap_or(1)).collect(),
    ))
}

fn merge(
    tree: &DecompositionTree,
    leaf_colorings: &[Coloring],
    next: &mut usize,
    n: usize,
) -> Vec<Option<usize>> {
    match tree {
        DecompositionTree::Atom { vertices } => {
            let c = &leaf_colorings[*next];
            *next += 1;
            let mut out = vec![None; n];
            for (i, v) in vertices.iter().enumerate() {
                out[v] = Some(c.color(i));
            }
            out
        }
        DecompositionTree::Split { cutset, left, right } => {
            let mut l = merge(left, leaf_colorings, next, n);
            let r = merge(right, leaf_colorings, next, n);
            let mut perm = std::collections::BTreeMap::new();
            let mut taken = std::collections::BTreeSet::new();
            for v in cutset.iter() {
                let (lc, rc) = (l[v].expect("cutset in left"), r[v].expect("cutset in right"));
                perm.insert(rc, lc);
                taken.insert(lc);
            }
            let right_colors: std::collections::BTreeSet<usize> = r.iter().flatten().copied().collect();
            let mut free = (1..).filter(|c| !taken.contains(c));
            for rc in right_colors {
                perm.entry(rc).or_insert_with(|| free.next().expect("infinite"));
            }
            for (v, rc) in r.iter().enumerate() {
                if let Some(rc) = rc {
                    l[v] = Some(perm[rc]);
                }
            }
            l
        }
    }
}
