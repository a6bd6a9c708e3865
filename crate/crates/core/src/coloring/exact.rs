use std::collections::HashMap;

use super::{ColorError, WeightedQuotient};
use crate::graph::{Graph, VertexSet};

/// Largest quotient accepted by the exact weighted colouring.
pub const EXACT_CAP: usize = 20;

/// Minimum number of stable sets covering every quotient vertex `w(v)` times.
pub fn exact_weighted_coloring(wq: &WeightedQuotient) -> Result<Vec<VertexSet>, ColorError> {
    let mut solver = Solver::new(wq)?;
    let mut budget = solver.lower_bound(&solver.start.clone());
    loop {
        if let Some(c) = solver.run(budget) {
            return Ok(c);
        }
        budget += 1;
    }
}

/// A cover with at most `budget` stable sets, if one exists.
pub fn weighted_coloring_within(
    wq: &WeightedQuotient,
    budget: usize,
) -> Result<Option<Vec<VertexSet>>, ColorError> {
    let mut solver = Solver::new(wq)?;
    Ok(solver.run(budget))
}

struct Solver {
    n: usize,
    adj: Vec<u32>,
    start: Vec<u16>,
    alpha: usize,
    /// Induced odd cycles `(mask, q)`: a stable set meets at most `q` of them.
    odd_cycles: Vec<(u32, usize)>,
    /// Largest budget known to fail for a demand vector.
    failed: HashMap<Vec<u16>, usize>,
}

impl Solver {
    fn new(wq: &WeightedQuotient) -> Result<Self, ColorError> {
        let n = wq.graph.n();
        if n > EXACT_CAP {
            return Err(ColorError::ExactCap { n, cap: EXACT_CAP });
        }
        let adj: Vec<u32> = (0..n)
            .map(|v| wq.graph.neighbors(v).fold(0u32, |m, u| m | 1 << u))
            .collect();
        let start = wq
            .weights
            .iter()
            .map(|&w| u16::try_from(w).map_err(|_| ColorError::Invariant("bag too large".into())))
            .collect::<Result<Vec<_>, _>>()?;
        let alpha = max_stable(&adj, (1u32 << n) - 1);
        Ok(Solver {
            n,
            adj,
            start,
            alpha: alpha.max(1),
            odd_cycles: odd_cycles(&wq.graph),
            failed: HashMap::new(),
        })
    }

    fn lower_bound(&self, d: &[u16]) -> usize {
        let mut lb = 0usize;
        let total: usize = d.iter().map(|&x| x as usize).sum();
        lb = lb.max(total.div_ceil(self.alpha));
        for v in 0..self.n {
            let dv = d[v] as usize;
            lb = lb.max(dv);
            let mut nb = self.adj[v];
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                lb = lb.max(dv + d[u] as usize);
            }
        }
        for &(mask, q) in &self.odd_cycles {
            let mut m = mask;
            let mut s = 0usize;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                s += d[v] as usize;
            }
            lb = lb.max(s.div_ceil(q));
        }
        lb
    }

    fn run(&mut self, budget: usize) -> Option<Vec<VertexSet>> {
        let mut path = Vec::new();
        let start = self.start.clone();
        if self.search(&start, budget, &mut path) {
            Some(
                path.into_iter()
                    .map(|m: u32| (0..self.n).filter(|&v| m >> v & 1 == 1).collect())
                    .collect(),
            )
        } else {
            None
        }
    }

    fn search(&mut self, d: &[u16], budget: usize, path: &mut Vec<u32>) -> bool {
        let Some(v) = d.iter().position(|&x| x > 0) else {
            return true;
        };
        if self.lower_bound(d) > budget {
            return false;
        }
        if self.failed.get(d).is_some_and(|&b| b >= budget) {
            return false;
        }
        let demanded: u32 = (0..self.n)
            .filter(|&u| d[u] > 0)
            .fold(0, |m, u| m | 1 << u);
        let rest = demanded & !self.adj[v] & !(1 << v);
        let mut sets = Vec::new();
        maximal_stable_sets(&self.adj, 0, rest, 0, &mut sets);
        let mut sets: Vec<u32> = sets.into_iter().map(|s| s | 1 << v).collect();
        sets.sort_by_key(|&s| (std::cmp::Reverse(s.count_ones()), s));
        for s in sets {
            let mut next = d.to_vec();
            for (u, x) in next.iter_mut().enumerate() {
                if s >> u & 1 == 1 {
                    *x -= 1;
                }
            }
            path.push(s);
            if self.search(&next, budget - 1, path) {
                return true;
            }
            path.pop();
        }
        let entry = self.failed.entry(d.to_vec()).or_insert(0);
        *entry = (*entry).max(budget);
        false
    }
}

/// Maximal stable sets of `G[cand ∪ chosen]` extending `chosen`
/// (Bron–Kerbosch on the complement, with `excluded` as the X set).
fn maximal_stable_sets(adj: &[u32], chosen: u32, cand: u32, excluded: u32, out: &mut Vec<u32>) {
    if cand == 0 {
        if excluded == 0 {
            out.push(chosen);
        }
        return;
    }
    // pivot: vertex of cand ∪ excluded with the most non-neighbours in cand
    let pool = cand | excluded;
    let mut best = (0u32, u32::MAX);
    let mut m = pool;
    while m != 0 {
        let u = m.trailing_zeros();
        m &= m - 1;
        let keep = (cand & !adj[u as usize] & !(1 << u)).count_ones();
        if best.1 == u32::MAX || keep > best.0 {
            best = (keep, u);
        }
    }
    let pivot = best.1 as usize;
    // branch on vertices that are the pivot or adjacent to it
    let mut branch = cand & (adj[pivot] | 1 << pivot);
    let (mut cand, mut excluded) = (cand, excluded);
    while branch != 0 {
        let u = branch.trailing_zeros() as usize;
        branch &= branch - 1;
        let non = !adj[u] & !(1 << u);
        maximal_stable_sets(adj, chosen | 1 << u, cand & non, excluded & non, out);
        cand &= !(1 << u);
        excluded |= 1 << u;
    }
}

fn max_stable(adj: &[u32], cand: u32) -> usize {
    if cand == 0 {
        return 0;
    }
    let v = cand.trailing_zeros() as usize;
    let without = max_stable(adj, cand & !(1 << v));
    let with = 1 + max_stable(adj, cand & !adj[v] & !(1 << v));
    without.max(with)
}

/// Induced odd cycles of length at most 9, as bitmasks with `q = len / 2`.
fn odd_cycles(g: &Graph) -> Vec<(u32, usize)> {
    const LIMIT: usize = 400;
    let n = g.n();
    let mut out = Vec::new();
    for start in 0..n {
        let mut path = vec![start];
        extend_paths(g, start, &mut path, &mut out, LIMIT);
        if out.len() >= LIMIT {
            break;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn extend_paths(g: &Graph, start: usize, path: &mut Vec<usize>, out: &mut Vec<(u32, usize)>, limit: usize) {
    if out.len() >= limit {
        return;
    }
    let last = *path.last().expect("non-empty");
    for next in g.neighbors(last) {
        if next <= start || path.contains(&next) {
            continue;
        }
        // the path must stay induced: next only touches `last` (and `start` when closing)
        if path.iter().skip(1).take(path.len().saturating_sub(2)).any(|&p| g.has_edge(p, next)) {
            continue;
        }
        let closes = path.len() >= 2 && g.has_edge(start, next);
        path.push(next);
        if closes {
            let len = path.len();
            if len % 2 == 1 && len >= 5 {
                let mask = path.iter().fold(0u32, |m, &v| m | 1 << v);
                out.push((mask, len / 2));
            }
        } else if path.len() < 9 {
            extend_paths(g, start, path, out, limit);
        }
        path.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, CatalogId};

    fn chi(g: Graph, w: Vec<usize>) -> usize {
        let wq = WeightedQuotient::new(g, w);
        let c = exact_weighted_coloring(&wq).unwrap();
        assert!(wq.is_cover(&c));
        c.len()
    }

    #[test]
    fn examples() {
        assert_eq!(chi(Graph::path(2), vec![2, 2]), 4);
        assert_eq!(chi(Graph::cycle(5), vec![1; 5]), 3);
        assert_eq!(chi(build(CatalogId::F5).unwrap().graph, vec![1; 10]), 3);
        assert_eq!(chi(Graph::cycle(5), vec![2; 5]), 5);
        assert_eq!(chi(Graph::cycle(7), vec![3; 7]), 7);
        assert_eq!(chi(Graph::new(0), vec![]), 0);
    }

    #[test]
    fn cap_enforced() {
        let wq = WeightedQuotient::new(Graph::cycle(21), vec![1; 21]);
        assert!(matches!(exact_weighted_coloring(&wq), Err(ColorError::ExactCap { .. })));
    }

    #[test]
    fn odd_cycles_of_petersen() {
        let p = build(CatalogId::F5).unwrap().graph;
        let cycles = odd_cycles(&p);
        assert_eq!(cycles.iter().filter(|c| c.1 == 2).count(), 12);
        assert!(cycles.iter().all(|&(m, q)| m.count_ones() as usize == 2 * q + 1));
    }

    #[test]
    fn agrees_with_blowup_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for id in [CatalogId::F5, CatalogId::F7, CatalogId::F12, CatalogId::F2(1), CatalogId::F3] {
            let h = build(id).unwrap().graph;
            for _ in 0..4 {
                let w: Vec<usize> = (0..h.n()).map(|_| rng.gen_range(0..=2)).collect();
                let (g, _) = crate::graph::blowup(&h, &w);
                if g.n() > 22 {
                    continue;
                }
                let expected = crate::testkit::oracle::exact_chi(&g).unwrap();
                let got = exact_weighted_coloring(&WeightedQuotient::new(h.clone(), w.clone())).unwrap();
                assert_eq!(got.len(), expected, "{id} {w:?}");
            }
        }
    }
}
