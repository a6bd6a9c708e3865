//! Brute-force oracles for small graphs.

use serde::Serialize;
use thiserror::Error;

use crate::coloring::Coloring;
use crate::graph::{bits, Graph};

/// Vertex cap of [`exact_chi`].
pub const CHI_CAP: usize = 24;
/// Vertex cap of [`exact_omega`] and [`exact_alpha`].
pub const CLIQUE_CAP: usize = 200;
/// Vertex cap of [`is_perfect_desk`].
pub const PERFECT_CAP: usize = 14;
/// Vertex cap of [`chi_by_stable_cover`].
pub const COVER_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, above the oracle cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
}

fn cap(g: &Graph, cap: usize) -> Result<(), OracleError> {
    if g.n() > cap {
        Err(OracleError::CapExceeded { n: g.n(), cap })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Perfectness {
    Yes,
    No,
    TooLarge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub chi: usize,
    pub omega: usize,
    pub alpha: usize,
    pub perfect: Perfectness,
}

/// All oracle values at once.
pub fn oracle(g: &Graph) -> Result<OracleResult, OracleError> {
    Ok(OracleResult {
        chi: exact_chi(g)?,
        omega: exact_omega(g)?,
        alpha: exact_alpha(g)?,
        perfect: is_perfect_desk(g),
    })
}

/// Largest clique, by branch and bound with greedy colouring bounds.
pub fn max_clique(g: &Graph) -> Result<Vec<usize>, OracleError> {
    cap(g, CLIQUE_CAP)?;
    let rows: Vec<Vec<u64>> = (0..g.n()).map(|v| g.row(v).to_vec()).collect();
    Ok(max_clique_rows(&rows, g.stride()))
}

pub fn exact_omega(g: &Graph) -> Result<usize, OracleError> {
    max_clique(g).map(|c| c.len())
}

pub fn exact_alpha(g: &Graph) -> Result<usize, OracleError> {
    cap(g, CLIQUE_CAP)?;
    let n = g.n();
    let stride = g.stride();
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|v| {
            let mut r: Vec<u64> = g.row(v).iter().map(|w| !w).collect();
            for (i, w) in r.iter_mut().enumerate() {
                let lo = i * 64;
                if lo + 64 > n {
                    let keep = n.saturating_sub(lo);
                    *w &= if keep == 0 { 0 } else { u64::MAX >> (64 - keep) };
                }
            }
            r[v / 64] &= !(1u64 << (v % 64));
            r
        })
        .collect();
    Ok(max_clique_rows(&rows, stride).len())
}

fn max_clique_rows(rows: &[Vec<u64>], stride: usize) -> Vec<usize> {
    let n = rows.len();
    let mut best = Vec::new();
    let mut cand = vec![0u64; stride];
    for v in 0..n {
        cand[v / 64] |= 1 << (v % 64);
    }
    let mut current = Vec::new();
    expand(rows, &mut current, cand, &mut best);
    best
}

fn expand(rows: &[Vec<u64>], current: &mut Vec<usize>, cand: Vec<u64>, best: &mut Vec<usize>) {
    // greedy colouring of the candidates gives an upper bound per vertex
    let (order, bounds) = color_sort(rows, &cand);
    let mut cand = cand;
    for i in (0..order.len()).rev() {
        if current.len() + bounds[i] <= best.len() {
            return;
        }
        let v = order[i];
        current.push(v);
        let next: Vec<u64> = cand.iter().zip(&rows[v]).map(|(a, b)| a & b).collect();
        if next.iter().all(|&w| w == 0) {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(rows, current, next, best);
        }
        current.pop();
        cand[v / 64] &= !(1 << (v % 64));
    }
}

fn color_sort(rows: &[Vec<u64>], cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let mut uncolored = cand.to_vec();
    let mut order = Vec::new();
    let mut bounds = Vec::new();
    let mut color = 0;
    while uncolored.iter().any(|&w| w != 0) {
        color += 1;
        let mut q = uncolored.clone();
        loop {
            let Some(v) = bits(&q).next() else { break };
            uncolored[v / 64] &= !(1 << (v % 64));
            q[v / 64] &= !(1 << (v % 64));
            for (a, b) in q.iter_mut().zip(&rows[v]) {
                *a &= !b;
            }
            order.push(v);
            bounds.push(color);
        }
    }
    (order, bounds)
}

/// Chromatic number by DSATUR branch and bound.
pub fn exact_chi(g: &Graph) -> Result<usize, OracleError> {
    optimal_coloring(g).map(|c| c.k())
}

/// A colouring with `χ(g)` colours.
pub fn optimal_coloring(g: &Graph) -> Result<Coloring, OracleError> {
    cap(g, CHI_CAP)?;
    let n = g.n();
    if n == 0 {
        return Ok(Coloring::from_colors(Vec::new()));
    }
    let omega = exact_omega(g)?;
    let alpha = exact_alpha(g)?;
    let lower = omega.max(n.div_ceil(alpha));
    let mut state = Dsatur {
        g,
        best: greedy(g),
        lower,
    };
    let mut colors = vec![0; n];
    state.search(&mut colors, 0, 0);
    Ok(Coloring::from_colors(state.best))
}

fn greedy(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut colors = vec![0usize; n];
    for _ in 0..n {
        let v = pick(g, &colors).expect("uncoloured vertex");
        let used: u64 = g.neighbors(v).fold(0, |m, u| m | (1u64 << colors[u]));
        colors[v] = (1..).find(|c| used >> c & 1 == 0).expect("free colour");
    }
    colors
}

/// Uncoloured vertex of largest saturation, then largest degree, then lowest id.
fn pick(g: &Graph, colors: &[usize]) -> Option<usize> {
    (0..g.n())
        .filter(|&v| colors[v] == 0)
        .map(|v| {
            let sat = g
                .neighbors(v)
                .fold(0u64, |m, u| m | (1u64 << colors[u]))
                & !1;
            (sat.count_ones(), g.degree(v), std::cmp::Reverse(v), v)
        })
        .max()
        .map(|t| t.3)
}

struct Dsatur<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    lower: usize,
}

impl Dsatur<'_> {
    fn best_k(&self) -> usize {
        self.best.iter().copied().max().unwrap_or(0)
    }

    fn search(&mut self, colors: &mut Vec<usize>, done: usize, used: usize) -> bool {
        if self.best_k() <= self.lower {
            return true;
        }
        if done == self.g.n() {
            if used < self.best_k() {
                self.best = colors.clone();
            }
            return self.best_k() <= self.lower;
        }
        let v = pick(self.g, colors).expect("uncoloured vertex");
        let forbidden: u64 = self.g.neighbors(v).fold(0, |m, u| m | (1u64 << colors[u]));
        let limit = (used + 1).min(self.best_k() - 1);
        for c in 1..=limit {
            if forbidden >> c & 1 == 1 {
                continue;
            }
            colors[v] = c;
            let stop = self.search(colors, done + 1, used.max(c));
            colors[v] = 0;
            if stop {
                return true;
            }
        }
        false
    }
}

/// Chromatic number by dynamic programming over vertex subsets: the fewest
/// stable sets covering each subset. Independent of [`exact_chi`].
pub fn chi_by_stable_cover(g: &Graph) -> Result<usize, OracleError> {
    cap(g, COVER_CAP)?;
    let n = g.n();
    let full = (1usize << n) - 1;
    let adj: Vec<usize> = (0..n)
        .map(|v| g.neighbors(v).fold(0, |m, u| m | 1 << u))
        .collect();
    let stable: Vec<bool> = (0..=full)
        .map(|s| (0..n).all(|v| s >> v & 1 == 0 || adj[v] & s == 0))
        .collect();
    let mut dp = vec![usize::MAX; full + 1];
    dp[0] = 0;
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s & !low;
        // stable subsets of `s` containing its lowest vertex
        let mut sub = rest;
        loop {
            let t = sub | low;
            if stable[t] && dp[s & !t] != usize::MAX {
                dp[s] = dp[s].min(dp[s & !t] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    Ok(dp[full])
}

/// Perfectness by searching for odd holes and odd antiholes.
pub fn is_perfect_desk(g: &Graph) -> Perfectness {
    if g.n() > PERFECT_CAP {
        return Perfectness::TooLarge;
    }
    let comp = g.complement().expect("below the complement cap");
    for k in (5..=g.n()).step_by(2) {
        let hole = Graph::cycle(k);
        if crate::patterns::find_induced_graph(g, &hole).is_some()
            || crate::patterns::find_induced_graph(&comp, &hole).is_some()
        {
            return Perfectness::No;
        }
    }
    Perfectness::Yes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, CatalogId};
    use crate::graph::uniform_blowup;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let p = build(CatalogId::F5).unwrap().graph;
        assert_eq!(exact_chi(&p).unwrap(), 3);
        assert_eq!(exact_alpha(&p).unwrap(), 4);
        assert_eq!(exact_chi(&uniform_blowup(&Graph::cycle(5), 2)).unwrap(), 5);
        assert_eq!(exact_chi(&Graph::complete(6)).unwrap(), 6);
        assert_eq!(exact_omega(&uniform_blowup(&Graph::cycle(7), 4)).unwrap(), 8);
        assert_eq!(exact_omega(&Graph::complete(9)).unwrap(), 9);
        assert_eq!(exact_chi(&Graph::new(0)).unwrap(), 0);
        assert_eq!(exact_chi(&Graph::new(3)).unwrap(), 1);
        assert!(exact_chi(&Graph::new(25)).is_err());
    }

    #[test]
    fn perfectness() {
        assert_eq!(is_perfect_desk(&Graph::cycle(6)), Perfectness::Yes);
        assert_eq!(is_perfect_desk(&Graph::cycle(7)), Perfectness::No);
        let anti = Graph::cycle(7).complement().unwrap();
        assert_eq!(is_perfect_desk(&anti), Perfectness::No);
        assert_eq!(is_perfect_desk(&Graph::cycle(15)), Perfectness::TooLarge);
    }

    #[test]
    fn large_clique_search() {
        let g = uniform_blowup(&Graph::cycle(9), 20);
        assert_eq!(g.n(), 180);
        assert_eq!(exact_omega(&g).unwrap(), 40);
        assert_eq!(exact_alpha(&g).unwrap(), 4);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |b| {
                let mut g = Graph::new(n);
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if b[k] {
                            g.add_edge(i, j);
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn chi_methods_agree(g in arb_graph(10)) {
            let c = optimal_coloring(&g).unwrap();
            prop_assert!(c.is_proper(&g));
            prop_assert_eq!(c.k(), chi_by_stable_cover(&g).unwrap());
        }

        #[test]
        fn oracle_consistency(g in arb_graph(12)) {
            let r = oracle(&g).unwrap();
            prop_assert!(r.omega <= r.chi && r.chi <= g.n());
            prop_assert!(r.alpha * r.chi >= g.n());
            if r.perfect == Perfectness::Yes {
                prop_assert_eq!(r.chi, r.omega);
            }
        }
    }
}
