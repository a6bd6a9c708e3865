//! 2-SAT over boolean variables `0..n`, used to pick good stable sets.

/// A literal: variable and polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    fn node(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }

    fn not(self) -> Self {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct TwoSat {
    n: usize,
    clauses: Vec<(Lit, Lit)>,
}

impl TwoSat {
    pub fn new(n: usize) -> Self {
        TwoSat {
            n,
            clauses: Vec::new(),
        }
    }

    pub fn or(&mut self, a: Lit, b: Lit) {
        self.clauses.push((a, b));
    }

    pub fn unit(&mut self, a: Lit) {
        self.clauses.push((a, a));
    }

    /// A satisfying assignment, if any.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let nodes = 2 * self.n;
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in &self.clauses {
            adj[a.not().node()].push(b.node());
            adj[b.not().node()].push(a.node());
        }
        let comp = tarjan(&adj);
        let mut out = Vec::with_capacity(self.n);
        for v in 0..self.n {
            let (t, f) = (comp[2 * v], comp[2 * v + 1]);
            if t == f {
                return None;
            }
            // Tarjan numbers components in reverse topological order
            out.push(t < f);
        }
        Some(out)
    }

    /// Assignment that sets variables true greedily in ascending order.
    pub fn solve_greedy_true(&self) -> Option<Vec<bool>> {
        self.solve()?;
        let mut fixed = self.clone();
        for v in 0..self.n {
            let mut trial = fixed.clone();
            trial.unit(Lit::pos(v));
            if trial.solve().is_some() {
                fixed = trial;
            } else {
                fixed.unit(Lit::neg(v));
            }
        }
        fixed.solve()
    }
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = work.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("on stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}
