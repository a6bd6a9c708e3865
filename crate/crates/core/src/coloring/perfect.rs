use super::{weighted_omega, ColorError, WeightedQuotient};
use crate::graph::{Graph, VertexSet};

/// Sides of a 2-colouring of `g[within]`, or `None` if it has an odd cycle.
pub(crate) fn bipartition(g: &Graph, within: &VertexSet) -> Option<(VertexSet, VertexSet)> {
    let mut side = vec![None; g.n()];
    for start in within.iter() {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            let su = side[u].expect("visited");
            for v in g.neighbors(u).filter(|&v| within.contains(v)) {
                match side[v] {
                    None => {
                        side[v] = Some(!su);
                        stack.push(v);
                    }
                    Some(sv) if sv == su => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let a = within.iter().filter(|&v| side[v] == Some(false)).collect();
    let b = within.iter().filter(|&v| side[v] == Some(true)).collect();
    Some((a, b))
}

/// Colour classes for a blowup of a bipartite quotient, exactly `ω` of them.
///
/// Each round takes every positive vertex of side A and every vertex of
/// side B whose weight equals the current `ω`; such a B vertex has only
/// zero-weight neighbours, so the set is stable, and it meets every heaviest
/// edge and vertex.
pub fn color_perfect_blowup(wq: &WeightedQuotient) -> Result<Vec<VertexSet>, ColorError> {
    let g = &wq.graph;
    let (a, b) = bipartition(g, &g.vertices()).ok_or(ColorError::NotBipartite)?;
    let mut w = wq.weights.clone();
    let mut classes = Vec::new();
    loop {
        let omega = weighted_omega(g, &w);
        if omega == 0 {
            return Ok(classes);
        }
        let s: VertexSet = a
            .iter()
            .filter(|&v| w[v] > 0)
            .chain(b.iter().filter(|&v| w[v] == omega))
            .collect();
        for v in s.iter() {
            w[v] -= 1;
        }
        classes.push(s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, CatalogId};

    fn run(g: Graph, w: Vec<usize>) -> usize {
        let wq = WeightedQuotient::new(g, w);
        let c = color_perfect_blowup(&wq).unwrap();
        assert!(wq.is_cover(&c));
        assert_eq!(c.len(), wq.omega());
        c.len()
    }

    #[test]
    fn examples() {
        assert_eq!(run(Graph::cycle(6), vec![1; 6]), 2);
        assert_eq!(run(build(CatalogId::F0p(3)).unwrap().graph, vec![2; 12]), 4);
        assert_eq!(run(Graph::path(2), vec![3, 5]), 8);
        assert_eq!(run(Graph::cycle(6), vec![1, 2, 1, 2, 1, 2]), 3);
        assert_eq!(run(Graph::path(4), vec![0, 4, 1, 0]), 5);
    }

    #[test]
    fn odd_cycle_rejected() {
        let wq = WeightedQuotient::new(Graph::cycle(5), vec![1; 5]);
        assert_eq!(color_perfect_blowup(&wq), Err(ColorError::NotBipartite));
    }
}
