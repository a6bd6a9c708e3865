//! Induction on `ω` for blowups of the catalog quotients.
//!
//! Each step either removes a structured block of colour classes that lowers
//! `ω` enough to stay within the budget, or finishes with a direct method.
//! The budget `B` always satisfies `B >= f(ω)` for the current weights, where
//! `f` is the binding function in force.

use super::cycle::{color_cycle_blowup, cycle_order};
use super::exact::{weighted_coloring_within, EXACT_CAP};
use super::perfect::{bipartition, color_perfect_blowup};
use super::sat::{Lit, TwoSat};
use super::{weighted_omega, BoundName, ColorError, WeightedQuotient};
use crate::catalog::{self, CatalogId};
use crate::graph::{Graph, VertexSet};

/// Largest number of weight-one vertices tried by the perfect-remainder step.
const REMAINDER_CAP: usize = 16;

/// Colour classes for the blowup `wq` using at most `budget` classes.
///
/// `table` assigns two colours out of five to every quotient vertex so that
/// adjacent vertices get disjoint pairs; when present, it is used to strip
/// two from every bag at a cost of five colours.
pub fn color_by_induction(
    wq: &WeightedQuotient,
    table: Option<&[[u8; 2]]>,
    bound: BoundName,
    budget: usize,
) -> Result<Vec<VertexSet>, ColorError> {
    let engine = Engine {
        g: &wq.graph,
        table,
        bound,
    };
    let classes = engine.solve(wq.weights.clone(), budget)?;
    if classes.len() > budget {
        return Err(ColorError::Invariant(format!(
            "{} classes exceed the budget {budget}",
            classes.len()
        )));
    }
    Ok(classes)
}

struct Engine<'a> {
    g: &'a Graph,
    table: Option<&'a [[u8; 2]]>,
    bound: BoundName,
}

impl Engine<'_> {
    fn solve(&self, mut w: Vec<usize>, mut budget: usize) -> Result<Vec<VertexSet>, ColorError> {
        let g = self.g;
        let mut classes = Vec::new();
        loop {
            let support: VertexSet = (0..g.n()).filter(|&v| w[v] > 0).collect();
            if support.is_empty() {
                return Ok(classes);
            }
            let omega = weighted_omega(g, &w);
            if omega > budget {
                return Err(ColorError::Invariant(format!(
                    "budget {budget} is below ω = {omega}"
                )));
            }

            let comps = g.components_within(&support);
            if comps.len() > 1 {
                let mut merged: Vec<VertexSet> = Vec::new();
                for comp in comps {
                    let wc = (0..g.n())
                        .map(|v| if comp.contains(v) { w[v] } else { 0 })
                        .collect();
                    for (i, c) in self.solve(wc, budget)?.into_iter().enumerate() {
                        match merged.get_mut(i) {
                            Some(m) => *m = m.union(&c),
                            None => merged.push(c),
                        }
                    }
                }
                classes.extend(merged);
                return Ok(classes);
            }

            if bipartition(g, &support).is_some() {
                classes.extend(on_support(g, &w, color_perfect_blowup)?);
                return Ok(classes);
            }

            if cycle_order(g, &support).is_some() {
                let c = on_support(g, &w, color_cycle_blowup)?;
                if c.len() <= budget {
                    classes.extend(c);
                    return Ok(classes);
                }
            }

            if let Some(t) = self.table {
                let rest: Vec<usize> = w.iter().map(|&x| x.saturating_sub(2)).collect();
                let rest_omega = weighted_omega(g, &rest);
                if rest_omega + 4 <= omega && 5 + self.bound.value(rest_omega) <= budget {
                    for c in 1..=5u8 {
                        let class: VertexSet = support
                            .iter()
                            .filter(|&v| {
                                let [a, b] = t[v];
                                if w[v] >= 2 {
                                    a == c || b == c
                                } else {
                                    a == c
                                }
                            })
                            .collect();
                        classes.push(class);
                    }
                    w = rest;
                    budget -= 5;
                    continue;
                }
            }

            if let Some(s) = good_stable_set(g, &w, omega) {
                for v in s.iter() {
                    w[v] -= 1;
                }
                classes.push(s);
                budget -= 1;
                continue;
            }

            if let Some(s) = perfect_remainder(g, &w, &support) {
                let mut rest = w.clone();
                for v in s.iter() {
                    rest[v] -= 1;
                }
                if weighted_omega(g, &rest) < budget {
                    classes.push(s);
                    classes.extend(on_support(g, &rest, color_perfect_blowup)?);
                    return Ok(classes);
                }
            }

            let (sub, map) = g.induced(&support);
            if sub.n() > EXACT_CAP {
                return Err(ColorError::Invariant(format!(
                    "no structured step applies to a support of {} vertices",
                    sub.n()
                )));
            }
            let sw = map.iter().map(|&v| w[v]).collect();
            let found = weighted_coloring_within(&WeightedQuotient::new(sub, sw), budget)?
                .ok_or_else(|| {
                    ColorError::Invariant(format!("no colouring within {budget} for ω = {omega}"))
                })?;
            classes.extend(lift(&found, &map));
            return Ok(classes);
        }
    }
}

/// Runs `f` on the blowup restricted to the positive vertices.
fn on_support(
    g: &Graph,
    w: &[usize],
    f: fn(&WeightedQuotient) -> Result<Vec<VertexSet>, ColorError>,
) -> Result<Vec<VertexSet>, ColorError> {
    let support: VertexSet = (0..g.n()).filter(|&v| w[v] > 0).collect();
    let (sub, map) = g.induced(&support);
    let sw = map.iter().map(|&v| w[v]).collect();
    Ok(lift(&f(&WeightedQuotient::new(sub, sw))?, &map))
}

fn lift(classes: &[VertexSet], map: &[usize]) -> Vec<VertexSet> {
    classes
        .iter()
        .map(|c| c.iter().map(|v| map[v]).collect())
        .collect()
}

/// A stable set meeting every maximum-weight vertex and edge, so that
/// removing it lowers `ω` by one.
fn good_stable_set(g: &Graph, w: &[usize], omega: usize) -> Option<VertexSet> {
    let n = g.n();
    let mut sat = TwoSat::new(n);
    for (v, &wv) in w.iter().enumerate() {
        if wv == 0 {
            sat.unit(Lit::neg(v));
        } else if wv == omega {
            sat.unit(Lit::pos(v));
        }
    }
    for (u, v) in g.edges() {
        if w[u] > 0 && w[v] > 0 {
            sat.or(Lit::neg(u), Lit::neg(v));
            if w[u] + w[v] == omega {
                sat.or(Lit::pos(u), Lit::pos(v));
            }
        }
    }
    let a = sat.solve_greedy_true()?;
    Some((0..n).filter(|&v| a[v]).collect())
}

/// Smallest stable set of weight-one vertices whose removal leaves a
/// bipartite support.
fn perfect_remainder(g: &Graph, w: &[usize], support: &VertexSet) -> Option<VertexSet> {
    let ones: Vec<usize> = support.iter().filter(|&v| w[v] == 1).collect();
    if ones.len() > REMAINDER_CAP {
        return None;
    }
    let mut masks: Vec<u32> = (1..1u32 << ones.len()).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m.reverse_bits()));
    masks.into_iter().find_map(|m| {
        let s: VertexSet = (0..ones.len())
            .filter(|&i| m >> i & 1 == 1)
            .map(|i| ones[i])
            .collect();
        (g.is_stable(&s) && bipartition(g, &support.difference(&s)).is_some()).then_some(s)
    })
}

/// Blowups of the `F2(t)` family: colour the five-cycle with the pairs of
/// largest `a`, largest `b` and largest `a + b`, then fit the other pairs
/// into the colours left free on the cycle.
pub(crate) fn color_f2_family(
    wq: &WeightedQuotient,
    t: usize,
    bound: BoundName,
    budget: usize,
) -> Result<Vec<VertexSet>, ColorError> {
    let w = &wq.weights;
    let pair = |i: usize| (w[5 + 2 * i], w[6 + 2 * i]);
    let pick = |key: &dyn Fn(usize) -> usize| (0..t).max_by_key(|&i| (key(i), std::cmp::Reverse(i)));
    let mut kept: Vec<usize> = [
        pick(&|i| pair(i).0),
        pick(&|i| pair(i).1),
        pick(&|i| pair(i).0 + pair(i).1),
    ]
    .into_iter()
    .flatten()
    .collect();
    kept.sort_unstable();
    kept.dedup();

    let mut order: Vec<usize> = (0..5).collect();
    for &i in &kept {
        order.push(5 + 2 * i);
        order.push(6 + 2 * i);
    }
    let sub = wq.graph.induced_ordered(&order);
    let sw = order.iter().map(|&v| w[v]).collect();
    let reduced = WeightedQuotient::new(sub, sw);
    let table = catalog::two_blowup_table(CatalogId::F2(kept.len()));
    let mut classes = lift(
        &color_by_induction(&reduced, table.as_deref(), bound, budget)?,
        &order,
    );

    let free_of = |v: usize, classes: &[VertexSet]| -> Vec<usize> {
        (0..classes.len()).filter(|&c| !classes[c].contains(v)).collect()
    };
    let a_free = free_of(0, &classes);
    let b_free = free_of(2, &classes);
    for i in (0..t).filter(|i| !kept.contains(i)) {
        let (y, z) = (5 + 2 * i, 6 + 2 * i);
        let (a, b) = pair(i);
        let ys: Vec<usize> = a_free
            .iter()
            .filter(|c| !b_free.contains(c))
            .chain(a_free.iter().filter(|c| b_free.contains(c)))
            .copied()
            .take(a)
            .collect();
        let zs: Vec<usize> = b_free.iter().filter(|c| !ys.contains(c)).copied().take(b).collect();
        if ys.len() < a || zs.len() < b {
            return Err(ColorError::Invariant(format!(
                "pair {i} with bags ({a}, {b}) does not fit the free colours"
            )));
        }
        for c in ys {
            classes[c].insert(y);
        }
        for c in zs {
            classes[c].insert(z);
        }
    }
    Ok(classes)
}
