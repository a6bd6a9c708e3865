use super::perfect::color_perfect_blowup;
use super::{weighted_omega, ColorError, WeightedQuotient};
use crate::graph::{Graph, VertexSet};

/// Quotient vertices in cyclic order, if `g` is a single cycle.
pub(crate) fn cycle_order(g: &Graph, within: &VertexSet) -> Option<Vec<usize>> {
    let m = within.len();
    if m < 3 {
        return None;
    }
    let deg2 = within
        .iter()
        .all(|v| within.intersect_row(g.row(v)).len() == 2);
    if !deg2 {
        return None;
    }
    let start = within.first()?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = within
            .intersect_row(g.row(cur))
            .iter()
            .find(|&x| x != prev)?;
        if next == start {
            break;
        }
        order.push(next);
        prev = cur;
        cur = next;
        if order.len() > m {
            return None;
        }
    }
    (order.len() == m).then_some(order)
}

/// Colour classes for a blowup of a cycle `C_m`.
///
/// Even cycles and cycles with an empty bag are bipartite and take `ω`
/// colours. For `m = 2q + 1` with equal bags of size `k` the classes come
/// from the explicit circular-interval assignment with `⌈(2q+1)k/q⌉` colours;
/// otherwise some edge is lighter than `ω`, and the alternate vertices
/// starting two steps after it form a good stable set.
pub fn color_cycle_blowup(wq: &WeightedQuotient) -> Result<Vec<VertexSet>, ColorError> {
    let g = &wq.graph;
    let order = cycle_order(g, &g.vertices()).ok_or(ColorError::NotACycle)?;
    let m = order.len();
    if m % 2 == 0 {
        return color_perfect_blowup(wq);
    }
    let q = m / 2;
    let mut w = wq.weights.clone();
    let mut classes = Vec::new();
    loop {
        if order.iter().any(|&v| w[v] == 0) {
            let rest = WeightedQuotient::new(g.clone(), w);
            classes.extend(color_perfect_blowup_on_path(&rest)?);
            return Ok(classes);
        }
        let omega = weighted_omega(g, &w);
        let light = (0..m).find(|&i| w[order[i]] + w[order[(i + 1) % m]] < omega);
        let Some(i) = light else {
            classes.extend(uniform_odd_cycle(&order, w[order[0]]));
            return Ok(classes);
        };
        let s: VertexSet = (1..=q).map(|j| order[(i + 2 * j) % m]).collect();
        for v in s.iter() {
            w[v] -= 1;
        }
        classes.push(s);
    }
}

/// Bipartite method restricted to the positive vertices.
fn color_perfect_blowup_on_path(wq: &WeightedQuotient) -> Result<Vec<VertexSet>, ColorError> {
    let support: VertexSet = (0..wq.graph.n()).filter(|&v| wq.weights[v] > 0).collect();
    let (sub, map) = wq.graph.induced(&support);
    let sw = map.iter().map(|&v| wq.weights[v]).collect();
    let classes = color_perfect_blowup(&WeightedQuotient::new(sub, sw))?;
    Ok(classes
        .into_iter()
        .map(|c| c.iter().map(|v| map[v]).collect())
        .collect())
}

/// `N = ⌈(2q+1)k/q⌉` colours on `C_{2q+1}` with all bags `k`: bag `i` gets
/// the `k` consecutive residues mod `N` starting at `⌊i q N / (2q+1)⌋`. The
/// starts wind `q` times around `Z_N` with consecutive gaps in `[k, N-k]`.
fn uniform_odd_cycle(order: &[usize], k: usize) -> Vec<VertexSet> {
    let m = order.len();
    let q = m / 2;
    let n_colors = (m * k).div_ceil(q);
    let mut classes = vec![VertexSet::new(); n_colors];
    for (i, &v) in order.iter().enumerate() {
        let start = i * q * n_colors / m;
        for j in 0..k {
            classes[(start + j) % n_colors].insert(v);
        }
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(m: usize, w: Vec<usize>) -> usize {
        let wq = WeightedQuotient::new(Graph::cycle(m), w);
        let c = color_cycle_blowup(&wq).unwrap();
        assert!(wq.is_cover(&c), "{m} {:?}", wq.weights);
        c.len()
    }

    #[test]
    fn uniform_odd_cycles_are_tight() {
        for q in 1..=8usize {
            for k in 1..=10usize {
                let m = 2 * q + 1;
                if m < 5 {
                    continue;
                }
                assert_eq!(run(m, vec![k; m]), (m * k).div_ceil(q), "C{m}^{k}");
            }
        }
    }

    #[test]
    fn examples() {
        assert_eq!(run(7, vec![3; 7]), 7);
        assert_eq!(run(5, vec![1; 5]), 3);
        assert_eq!(run(6, vec![1, 2, 1, 2, 1, 2]), 3);
        assert_eq!(run(5, vec![1, 3, 3, 3, 3]), 7);
        assert_eq!(run(5, vec![0, 3, 3, 3, 3]), 6);
    }

    #[test]
    fn non_cycle_rejected() {
        let wq = WeightedQuotient::new(Graph::path(5), vec![1; 5]);
        assert_eq!(color_cycle_blowup(&wq), Err(ColorError::NotACycle));
    }

    #[test]
    fn weighted_odd_cycles_meet_the_bound() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let q = rng.gen_range(2..=5);
            let m = 2 * q + 1;
            let w: Vec<usize> = (0..m).map(|_| rng.gen_range(0..=6)).collect();
            let wq = WeightedQuotient::new(Graph::cycle(m), w.clone());
            let omega = wq.omega();
            let used = run(m, w);
            assert!(used <= omega + omega.div_ceil(2 * q), "{used} > bound for ω={omega}");
        }
    }
}
