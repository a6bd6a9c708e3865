//! Connected graphs up to isomorphism, by one-vertex augmentation and
//! canonical forms.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::Graph;

/// Largest order accepted by [`enumerate_small`].
pub const SMALL_CAP: usize = 7;
/// Largest order the canonical form supports.
pub const HARD_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("order {n} is above the cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
}

/// Connected graphs on `n <= 7` vertices, one per isomorphism class.
pub fn enumerate_small(n: usize) -> Result<Vec<Graph>, EnumerateError> {
    if n > SMALL_CAP {
        return Err(EnumerateError::CapExceeded { n, cap: SMALL_CAP });
    }
    enumerate_connected(n)
}

/// Same as [`enumerate_small`] up to order 10. Order 8 takes minutes; the
/// larger orders are impractical.
pub fn enumerate_connected(n: usize) -> Result<Vec<Graph>, EnumerateError> {
    if n > HARD_CAP {
        return Err(EnumerateError::CapExceeded { n, cap: HARD_CAP });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut level: Vec<u64> = vec![0];
    for k in 2..=n {
        let mut seen = HashSet::new();
        for &code in &level {
            let g = decode(k - 1, code);
            for mask in 0..1u64 << (k - 1) {
                let mut h = g.disjoint_union(&Graph::new(1));
                for v in 0..k - 1 {
                    if mask >> v & 1 == 1 {
                        h.add_edge(v, k - 1);
                    }
                }
                seen.insert(canonical_code(&h));
            }
        }
        level = seen.into_iter().collect();
    }
    let mut out: Vec<(usize, u64)> = level
        .into_iter()
        .map(|c| (c.count_ones() as usize, c))
        .collect();
    out.sort_unstable();
    Ok(out
        .into_iter()
        .map(|(_, c)| decode(n, c))
        .filter(|g| g.is_connected())
        .collect())
}

fn pair_index(u: usize, v: usize) -> usize {
    // u < v
    v * (v - 1) / 2 + u
}

fn encode(g: &Graph, order: &[usize]) -> u64 {
    let mut code = 0u64;
    for j in 1..order.len() {
        for i in 0..j {
            if g.has_edge(order[i], order[j]) {
                code |= 1 << pair_index(i, j);
            }
        }
    }
    code
}

fn decode(n: usize, code: u64) -> Graph {
    let mut g = Graph::new(n);
    for j in 1..n {
        for i in 0..j {
            if code >> pair_index(i, j) & 1 == 1 {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Colour refinement with isomorphism-invariant cell labels.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut color: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut ns: Vec<usize> = g.neighbors(v).map(|u| color[u]).collect();
                ns.sort_unstable();
                (color[v], ns)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| distinct.binary_search(s).expect("present"))
            .collect();
        let before = {
            let mut c = color.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        color = next;
        if distinct.len() == before {
            return color;
        }
    }
}

/// Cells of the refined partition, ordered by label.
fn cells(g: &Graph) -> Vec<Vec<usize>> {
    let color = refine(g);
    let k = color.iter().copied().max().map_or(0, |m| m + 1);
    let mut cells = vec![Vec::new(); k];
    for (v, &c) in color.iter().enumerate() {
        cells[c].push(v);
    }
    cells.retain(|c| !c.is_empty());
    cells
}

/// Calls `f` on every vertex order that lists the cells in sequence.
fn for_each_order(cells: &[Vec<usize>], f: &mut dyn FnMut(&[usize])) {
    fn rec(cells: &[Vec<usize>], i: usize, order: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == cells.len() {
            f(order);
            return;
        }
        let mut cell = cells[i].clone();
        permute(&mut cell, 0, &mut |p| {
            let len = order.len();
            order.extend_from_slice(p);
            rec(cells, i + 1, order, f);
            order.truncate(len);
        });
    }
    rec(cells, 0, &mut Vec::new(), f);
}

fn permute(xs: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, f);
        xs.swap(k, i);
    }
}

/// Smallest adjacency code over the orders compatible with the refined
/// partition. Equal for isomorphic graphs of the same order.
pub fn canonical_code(g: &Graph) -> u64 {
    assert!(g.n() <= HARD_CAP, "canonical form supports at most {HARD_CAP} vertices");
    let mut best = u64::MAX;
    for_each_order(&cells(g), &mut |order| best = best.min(encode(g, order)));
    best
}

/// Order of the automorphism group, by brute force over the refined cells.
pub fn automorphism_count(g: &Graph) -> usize {
    let cells = cells(g);
    let identity: Vec<usize> = cells.concat();
    let reference = encode(g, &identity);
    let mut count = 0;
    for_each_order(&cells, &mut |order| {
        if encode(g, order) == reference {
            count += 1;
        }
    });
    count
}
