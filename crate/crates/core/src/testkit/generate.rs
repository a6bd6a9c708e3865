//! Seeded instances built from catalog blowups glued along cliques and
//! topped with universal cliques.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, CatalogId};
use crate::coloring::WeightedQuotient;
use crate::graph::Graph;
use crate::patterns::{classify, ClassLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecipeError {
    #[error("recipe has no parts")]
    NoParts,
    #[error("part {part}: {reason}")]
    BadPart { part: usize, reason: String },
    #[error("glue step {step}: {reason}")]
    BadGlue { step: usize, reason: String },
}

/// A clique blowup of one catalog member; `bags[v] >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePart {
    pub id: CatalogId,
    pub bags: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum GlueOp {
    /// Identify a clique of `size` vertices of `part` with a clique of an
    /// earlier part. Each part is identified at most once.
    Identify { part: usize, size: usize },
    /// Add a clique of `size` new vertices complete to `part` (and to the
    /// earlier universal cliques that cover it), or to everything if `None`.
    Universal { size: usize, part: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecipe {
    pub seed: u64,
    pub parts: Vec<BasePart>,
    pub glue: Vec<GlueOp>,
}

/// Where a part ended up in the final graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartLayout {
    pub id: CatalogId,
    pub bags: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalLayout {
    pub vertices: Vec<usize>,
    pub part: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub recipe: InstanceRecipe,
    #[serde(serialize_with = "as_graph6")]
    pub graph: Graph,
    pub parts: Vec<PartLayout>,
    pub universals: Vec<UniversalLayout>,
    pub labels: ClassLabel,
    /// Clique number read off the construction.
    pub omega: usize,
}

/// Builds the graph described by `recipe`. Clique choices for the glue
/// steps are drawn from a generator seeded with `recipe.seed`.
pub fn generate(recipe: &InstanceRecipe) -> Result<Instance, RecipeError> {
    if recipe.parts.is_empty() {
        return Err(RecipeError::NoParts);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.seed);

    // raw vertex ids: parts first, in order, then universal cliques
    let mut quotients = Vec::new();
    let mut part_bags: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut raw_edges: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    for (i, part) in recipe.parts.iter().enumerate() {
        let bad = |reason: String| RecipeError::BadPart { part: i, reason };
        let h = catalog::build(part.id).map_err(|e| bad(e.to_string()))?.graph;
        if part.bags.len() != h.n() {
            return Err(bad(format!("{} bags for {} quotient vertices", part.bags.len(), h.n())));
        }
        if part.bags.contains(&0) {
            return Err(bad("empty bag".into()));
        }
        let (b, bags) = crate::graph::blowup(&h, &part.bags);
        raw_edges.extend(b.edges().map(|(u, v)| (u + next, v + next)));
        part_bags.push(
            bags.iter()
                .map(|bag| bag.iter().map(|&v| v + next).collect())
                .collect(),
        );
        next += b.n();
        quotients.push(h);
    }

    let mut rep: Vec<usize> = (0..next).collect();
    let mut identified = vec![false; recipe.parts.len()];
    let mut universals: Vec<(Vec<usize>, Option<usize>)> = Vec::new();
    for (step, op) in recipe.glue.iter().enumerate() {
        let bad = |reason: &str| RecipeError::BadGlue {
            step,
            reason: reason.to_string(),
        };
        match *op {
            GlueOp::Identify { part, size } => {
                if !universals.is_empty() {
                    return Err(bad("identify steps must precede universal cliques"));
                }
                if part == 0 || part >= recipe.parts.len() {
                    return Err(bad("part must be a later part"));
                }
                if identified[part] {
                    return Err(bad("part already identified"));
                }
                let mine = pick_clique(&mut rng, &quotients[part], &part_bags[part], size)
                    .ok_or_else(|| bad("part has no clique of that size"))?;
                let mut earlier: Vec<usize> = (0..part).collect();
                earlier.shuffle(&mut rng);
                let theirs = earlier
                    .into_iter()
                    .find_map(|j| pick_clique(&mut rng, &quotients[j], &part_bags[j], size))
                    .ok_or_else(|| bad("no earlier part has a clique of that size"))?;
                for (a, b) in mine.into_iter().zip(theirs) {
                    rep[a] = find(&rep, b);
                }
                identified[part] = true;
            }
            GlueOp::Universal { size, part } => {
                if size == 0 {
                    return Err(bad("empty universal clique"));
                }
                if part.is_some_and(|p| p >= recipe.parts.len()) {
                    return Err(bad("no such part"));
                }
                let vs: Vec<usize> = (next..next + size).collect();
                next += size;
                rep.extend(vs.iter().copied());
                for (i, &u) in vs.iter().enumerate() {
                    for &v in &vs[i + 1..] {
                        raw_edges.push((u, v));
                    }
                }
                let mut targets: Vec<usize> = Vec::new();
                for (p, bags) in part_bags.iter().enumerate() {
                    if part.is_none_or(|q| q == p) {
                        targets.extend(bags.iter().flatten());
                    }
                }
                for (uvs, upart) in &universals {
                    if part.is_none() || upart.is_none() || *upart == part {
                        targets.extend(uvs);
                    }
                }
                for &u in &vs {
                    raw_edges.extend(targets.iter().map(|&t| (u, t)));
                }
                universals.push((vs, part));
            }
        }
    }

    // compact the surviving representatives
    let mut index = vec![usize::MAX; next];
    let mut n = 0;
    for v in 0..next {
        let r = find(&rep, v);
        if index[r] == usize::MAX {
            index[r] = n;
            n += 1;
        }
    }
    let id = |v: usize| index[find(&rep, v)];
    let mut graph = Graph::new(n);
    for &(u, v) in &raw_edges {
        let (a, b) = (id(u), id(v));
        if a != b {
            graph.add_edge(a, b);
        }
    }

    let parts: Vec<PartLayout> = recipe
        .parts
        .iter()
        .zip(&part_bags)
        .map(|(p, bags)| PartLayout {
            id: p.id,
            bags: bags
                .iter()
                .map(|bag| bag.iter().map(|&v| id(v)).collect())
                .collect(),
        })
        .collect();
    let mut omega = 0;
    for (p, part) in recipe.parts.iter().enumerate() {
        let base = WeightedQuotient::new(quotients[p].clone(), part.bags.clone()).omega();
        let extra: usize = universals
            .iter()
            .filter(|(_, up)| up.is_none_or(|q| q == p))
            .map(|(vs, _)| vs.len())
            .sum();
        omega = omega.max(base + extra);
    }
    let universals = universals
        .into_iter()
        .map(|(vs, part)| UniversalLayout {
            vertices: vs.into_iter().map(id).collect(),
            part,
        })
        .collect();
    let labels = classify(&graph);
    Ok(Instance {
        recipe: recipe.clone(),
        graph,
        parts,
        universals,
        labels,
        omega,
    })
}

fn as_graph6<S: serde::Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&crate::io::to_graph6(g))
}

fn find(rep: &[usize], mut v: usize) -> usize {
    while rep[v] != v {
        v = rep[v];
    }
    v
}

/// A random clique of `size` vertices inside one bag or two adjacent bags.
fn pick_clique(
    rng: &mut ChaCha8Rng,
    h: &Graph,
    bags: &[Vec<usize>],
    size: usize,
) -> Option<Vec<usize>> {
    if size == 0 {
        return None;
    }
    let mut options: Vec<Vec<usize>> = Vec::new();
    for (u, bag) in bags.iter().enumerate() {
        if bag.len() >= size {
            options.push(bag.clone());
        }
        for v in h.neighbors(u).filter(|&v| v > u) {
            if bag.len() + bags[v].len() >= size {
                options.push(bag.iter().chain(&bags[v]).copied().collect());
            }
        }
    }
    let mut pool = options.choose(rng)?.clone();
    pool.shuffle(rng);
    pool.truncate(size);
    Some(pool)
}

/// Catalog members the sampler draws from.
const POOL: &[CatalogId] = &[
    CatalogId::Cycle(5),
    CatalogId::Cycle(6),
    CatalogId::Cycle(7),
    CatalogId::Cycle(8),
    CatalogId::Cycle(9),
    CatalogId::Cycle(11),
    CatalogId::F0p(1),
    CatalogId::F0p(2),
    CatalogId::F2(1),
    CatalogId::F2(2),
    CatalogId::F2(3),
    CatalogId::F3,
    CatalogId::F4,
    CatalogId::F5,
    CatalogId::F7,
    CatalogId::F8,
    CatalogId::F9,
    CatalogId::F10,
    CatalogId::F11,
    CatalogId::F12,
];

/// A random recipe with at most `max_vertices` vertices in the result.
pub fn random_recipe(seed: u64, max_vertices: usize) -> InstanceRecipe {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nparts = match rng.gen_range(0..20) {
        0..=9 => 1,
        10..=16 => 2,
        _ => 3,
    };
    let mut glue = Vec::new();
    let mut reserved = 0;
    if rng.gen_bool(0.3) {
        let size = rng.gen_range(1..=2);
        let part = if rng.gen_bool(0.5) {
            None
        } else {
            Some(rng.gen_range(0..nparts))
        };
        reserved += size;
        glue.push(GlueOp::Universal { size, part });
    }
    let mut identify = Vec::new();
    for part in 1..nparts {
        if rng.gen_bool(0.85) {
            let size = [1, 1, 2, 2, 3][rng.gen_range(0..5)];
            identify.push(GlueOp::Identify { part, size });
        }
    }
    glue.splice(0..0, identify);

    let mut room = max_vertices.saturating_sub(reserved);
    let mut parts = Vec::new();
    for i in 0..nparts {
        let share = room / (nparts - i);
        let fitting: Vec<CatalogId> = POOL
            .iter()
            .copied()
            .filter(|id| id.vertex_count() <= share)
            .collect();
        let Some(&id) = fitting.choose(&mut rng) else {
            break;
        };
        let h_n = id.vertex_count();
        let top = match rng.gen_range(0..10) {
            0..=2 => 1,
            3..=6 => 2,
            _ => 4,
        };
        let mut bags: Vec<usize> = (0..h_n).map(|_| rng.gen_range(1..=top)).collect();
        while bags.iter().sum::<usize>() > share {
            let i = (0..h_n).max_by_key(|&i| (bags[i], i)).expect("non-empty");
            bags[i] -= 1;
        }
        room -= bags.iter().sum::<usize>();
        parts.push(BasePart { id, bags });
    }
    // drop glue referring to parts that did not fit, and shrink identified
    // cliques to sizes both sides can offer
    let kept = parts.len();
    glue.retain(|op| match op {
        GlueOp::Identify { part, .. } => *part < kept,
        GlueOp::Universal { part, .. } => part.is_none_or(|p| p < kept),
    });
    let omegas: Vec<usize> = parts
        .iter()
        .map(|p| {
            let h = catalog::build(p.id).expect("pool member").graph;
            WeightedQuotient::new(h, p.bags.clone()).omega()
        })
        .collect();
    for op in &mut glue {
        if let GlueOp::Identify { part, size } = op {
            let earlier = omegas[..*part].iter().copied().max().unwrap_or(0);
            *size = (*size).min(omegas[*part]).min(earlier);
        }
    }
    InstanceRecipe { seed, parts, glue }
}

/// A generated instance for `seed`, falling back to plain parts when a
/// glue step cannot be realised.
pub fn sample(seed: u64, max_vertices: usize) -> Instance {
    let mut recipe = random_recipe(seed, max_vertices);
    match generate(&recipe) {
        Ok(inst) => inst,
        Err(_) => {
            recipe.glue.retain(|op| matches!(op, GlueOp::Universal { .. }));
            generate(&recipe).expect("unglued recipe is valid")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::oracle::exact_omega;

    #[test]
    fn sampled_instances_respect_the_size_and_omega() {
        for seed in 0..300 {
            let inst = sample(seed, 40);
            assert!(inst.graph.n() <= 40, "seed {seed}: {} vertices", inst.graph.n());
            assert!(inst.graph.n() > 0);
            assert_eq!(exact_omega(&inst.graph).unwrap(), inst.omega, "seed {seed}");
            assert!(inst.labels.c4free, "seed {seed}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for seed in [1, 7, 99] {
            let a = sample(seed, 40);
            let b = sample(seed, 40);
            assert_eq!(a.graph, b.graph);
            assert_eq!(a.recipe, b.recipe);
        }
    }

    #[test]
    fn layouts_match_the_graph() {
        for seed in 0..100 {
            let inst = sample(seed, 40);
            for part in &inst.parts {
                let h = catalog::build(part.id).unwrap().graph;
                for (u, bu) in part.bags.iter().enumerate() {
                    for (v, bv) in part.bags.iter().enumerate() {
                        for &x in bu {
                            for &y in bv {
                                if x != y {
                                    let want = u == v || h.has_edge(u, v);
                                    assert_eq!(inst.graph.has_edge(x, y), want, "seed {seed}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn explicit_recipe() {
        let recipe = InstanceRecipe {
            seed: 3,
            parts: vec![
                BasePart { id: CatalogId::F5, bags: vec![1; 10] },
                BasePart { id: CatalogId::Cycle(5), bags: vec![2; 5] },
            ],
            glue: vec![
                GlueOp::Identify { part: 1, size: 2 },
                GlueOp::Universal { size: 1, part: None },
            ],
        };
        let inst = generate(&recipe).unwrap();
        assert_eq!(inst.graph.n(), 10 + 10 - 2 + 1);
        assert_eq!(inst.omega, 5);
        let bad = InstanceRecipe {
            glue: vec![GlueOp::Identify { part: 0, size: 1 }],
            ..recipe.clone()
        };
        assert!(matches!(generate(&bad), Err(RecipeError::BadGlue { .. })));
        let json = serde_json::to_string(&recipe).unwrap();
        assert_eq!(serde_json::from_str::<InstanceRecipe>(&json).unwrap(), recipe);
    }
}
