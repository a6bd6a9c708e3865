//! Colorings of class members within the class binding functions.

mod cycle;
mod exact;
mod induction;
mod perfect;
mod sat;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{self, CatalogId};
use crate::decompose;
use crate::graph::{Graph, VertexSet};
use crate::patterns::{class_witness, classify, ClassLabel, GraphClass, Pattern, TreeKind, TriangleKind};
use crate::recognizer::{self, BlowupCertificate, CoreKind, Witness};

pub use cycle::color_cycle_blowup;
pub use exact::{exact_weighted_coloring, weighted_coloring_within, EXACT_CAP};
pub use induction::color_by_induction;
pub use perfect::color_perfect_blowup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColorError {
    #[error("graph is not in class {class}: contains {pattern} at {embedding:?}")]
    NotInClass {
        class: GraphClass,
        pattern: Pattern,
        embedding: Vec<usize>,
    },
    #[error("quotient is not a cycle")]
    NotACycle,
    #[error("quotient is not bipartite")]
    NotBipartite,
    #[error("quotient {0} is not handled by the induction engine")]
    UnsupportedQuotient(CatalogId),
    #[error("exact colouring needs at most {cap} quotient vertices, got {n}")]
    ExactCap { n: usize, cap: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Proper coloring with colours `1..=k` and no gaps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<usize>,
}

impl Coloring {
    /// Relabels the given values onto `1..=k` preserving their order.
    pub fn from_colors(raw: Vec<usize>) -> Self {
        let mut distinct = raw.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let colors = raw
            .into_iter()
            .map(|c| distinct.binary_search(&c).expect("present") + 1)
            .collect();
        Coloring { colors }
    }

    /// Colour `c + 1` for every vertex in `classes[c]`; vertices must be
    /// covered exactly once.
    pub fn from_classes(n: usize, classes: &[VertexSet]) -> Option<Self> {
        let mut colors = vec![0; n];
        for (c, class) in classes.iter().enumerate() {
            for v in class.iter() {
                if v >= n || colors[v] != 0 {
                    return None;
                }
                colors[v] = c + 1;
            }
        }
        if colors.contains(&0) {
            return None;
        }
        Some(Coloring::from_colors(colors))
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Number of colours used.
    pub fn k(&self) -> usize {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        self.colors.len() == g.n() && g.edges().all(|(u, v)| self.colors[u] != self.colors[v])
    }

    /// First edge whose endpoints share a colour.
    pub fn conflict(&self, g: &Graph) -> Option<(usize, usize)> {
        g.edges().find(|&(u, v)| self.colors[u] == self.colors[v])
    }
}

/// A triangle-free quotient with non-negative bag sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedQuotient {
    pub graph: Graph,
    pub weights: Vec<usize>,
}

impl WeightedQuotient {
    pub fn new(graph: Graph, weights: Vec<usize>) -> Self {
        assert_eq!(graph.n(), weights.len(), "one weight per quotient vertex");
        WeightedQuotient { graph, weights }
    }

    /// Clique number of the blowup: the heaviest vertex or edge.
    pub fn omega(&self) -> usize {
        weighted_omega(&self.graph, &self.weights)
    }

    pub fn total(&self) -> usize {
        self.weights.iter().sum()
    }

    /// Whether `classes` covers every quotient vertex exactly `w(v)` times
    /// with stable sets.
    pub fn is_cover(&self, classes: &[VertexSet]) -> bool {
        let mut count = vec![0usize; self.graph.n()];
        for c in classes {
            if !self.graph.is_stable(c) {
                return false;
            }
            for v in c.iter() {
                if v >= count.len() {
                    return false;
                }
                count[v] += 1;
            }
        }
        count == self.weights
    }

    /// The blowup graph and its bags.
    pub fn expand(&self) -> (Graph, Vec<Vec<usize>>) {
        crate::graph::blowup(&self.graph, &self.weights)
    }
}

pub(crate) fn weighted_omega(g: &Graph, w: &[usize]) -> usize {
    let vmax = w.iter().copied().max().unwrap_or(0);
    let emax = g.edges().map(|(u, v)| w[u] + w[v]).max().unwrap_or(0);
    vmax.max(emax)
}

/// Turns per-colour quotient classes into a coloring of the blowup whose
/// bags are `bags` (`bags[v]` for quotient vertex `v`).
pub fn expand_classes(n: usize, bags: &[Vec<usize>], classes: &[VertexSet]) -> Option<Coloring> {
    let mut next = vec![0usize; bags.len()];
    let mut colors = vec![0usize; n];
    for (c, class) in classes.iter().enumerate() {
        for q in class.iter() {
            let bag = bags.get(q)?;
            let i = next[q];
            if i >= bag.len() {
                return None;
            }
            colors[bag[i]] = c + 1;
            next[q] += 1;
        }
    }
    if colors.contains(&0) {
        return None;
    }
    Some(Coloring::from_colors(colors))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    #[serde(rename = "omega_plus_1")]
    OmegaPlus1,
    FiveQuarters,
    SevenSixths,
    NineEighths,
}

impl BoundName {
    pub fn value(self, omega: usize) -> usize {
        match self {
            BoundName::OmegaPlus1 => {
                if omega == 0 {
                    0
                } else {
                    omega + 1
                }
            }
            BoundName::FiveQuarters => (5 * omega).div_ceil(4),
            BoundName::SevenSixths => (7 * omega).div_ceil(6),
            BoundName::NineEighths => (9 * omega).div_ceil(8),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::OmegaPlus1 => "omega_plus_1",
            BoundName::FiveQuarters => "five_quarters",
            BoundName::SevenSixths => "seven_sixths",
            BoundName::NineEighths => "nine_eighths",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub class: String,
    pub labels: ClassLabel,
    pub omega: usize,
    pub bound: BoundName,
    pub bound_value: usize,
    pub colors_used: usize,
}

/// Tightest binding function applicable to `class` given the extra labels.
/// Unknown labels count as not free.
pub fn bound_for(class: GraphClass, omega: usize, labels: &ClassLabel) -> (BoundName, usize) {
    let mut candidates = Vec::new();
    match class.triangle {
        TriangleKind::Hammer => candidates.push(BoundName::OmegaPlus1),
        TriangleKind::Bull => {
            candidates.push(BoundName::FiveQuarters);
            if labels.c5sqfree.is_yes() {
                candidates.push(BoundName::SevenSixths);
                if labels.c7q4free.is_yes() {
                    candidates.push(match class.tree {
                        TreeKind::P7 => BoundName::OmegaPlus1,
                        TreeKind::ForkPlus => BoundName::NineEighths,
                    });
                }
            }
        }
    }
    // later candidates are more specific, so they win ties
    let best = candidates
        .into_iter()
        .rev()
        .min_by_key(|b| b.value(omega))
        .expect("at least one candidate");
    (best, best.value(omega))
}

/// Colours one certified core within `budget` colours, where `bound` is a
/// binding function valid for every induced subgraph of the core.
pub fn color_core(
    core: &CoreKind,
    n: usize,
    bound: BoundName,
    budget: usize,
) -> Result<Coloring, ColorError> {
    match core {
        CoreKind::Complete { size } => {
            debug_assert_eq!(*size, n);
            Ok(Coloring::from_colors((1..=n).collect()))
        }
        CoreKind::Blowup { certificate } => color_blowup(certificate, n, bound, budget),
        CoreKind::NotInClass { witness } => Err(ColorError::Invariant(format!(
            "core outside the class: {witness:?}"
        ))),
    }
}

fn color_blowup(
    cert: &BlowupCertificate,
    n: usize,
    bound: BoundName,
    budget: usize,
) -> Result<Coloring, ColorError> {
    let h = catalog::build(cert.quotient)
        .map_err(|e| ColorError::Invariant(e.to_string()))?
        .graph;
    let wq = WeightedQuotient::new(h, cert.bag_sizes());
    let classes = match cert.quotient {
        CatalogId::Cycle(_) | CatalogId::F0p(_) if cert.quotient.is_bipartite() => {
            color_perfect_blowup(&wq)?
        }
        CatalogId::Cycle(_) => {
            let c = color_cycle_blowup(&wq)?;
            if c.len() <= budget {
                c
            } else {
                color_by_induction(&wq, None, bound, budget)?
            }
        }
        CatalogId::F2(t) => induction::color_f2_family(&wq, t, bound, budget)?,
        id => color_by_induction(&wq, catalog::two_blowup_table(id).as_deref(), bound, budget)?,
    };
    if !wq.is_cover(&classes) {
        return Err(ColorError::Invariant(format!(
            "quotient colouring of {} does not cover the bags",
            cert.quotient
        )));
    }
    let bags: Vec<Vec<usize>> = cert.bags.iter().map(VertexSet::to_vec).collect();
    expand_classes(n, &bags, &classes)
        .ok_or_else(|| ColorError::Invariant("bag expansion failed".into()))
}

/// Per-atom summary of a run of [`color`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomSummary {
    pub vertices: VertexSet,
    pub peeled: usize,
    pub core: CoreKind,
    pub colors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColorOutcome {
    pub coloring: Coloring,
    pub report: BoundReport,
    pub atoms: Vec<AtomSummary>,
}

/// Full pipeline: class check, components, clique-cutset decomposition,
/// universal peel, core colouring and recombination.
pub fn color(g: &Graph, class: GraphClass) -> Result<ColorOutcome, ColorError> {
    let labels = classify(g);
    color_with_labels(g, class, labels)
}

/// Same as [`color`] with labels computed by the caller.
pub fn color_with_labels(
    g: &Graph,
    class: GraphClass,
    labels: ClassLabel,
) -> Result<ColorOutcome, ColorError> {
    if !labels.in_class(class) {
        let (pattern, embedding) = class_witness(g, class)
            .ok_or_else(|| ColorError::Invariant("labels disagree with witness search".into()))?;
        return Err(ColorError::NotInClass {
            class,
            pattern,
            embedding,
        });
    }

    struct Prepared {
        global: Vec<usize>,
        peel: decompose::Peel,
        core: CoreKind,
        core_map: Vec<usize>,
        omega: usize,
    }

    let mut components = Vec::new();
    let mut omega = 0;
    for comp in g.components() {
        let (cg, cmap) = g.induced(&comp);
        let tree = decompose::decompose(&cg).map_err(|e| ColorError::Invariant(e.to_string()))?;
        let mut atoms = Vec::new();
        for leaf in tree.leaves() {
            let (ag, amap) = cg.induced(leaf);
            let peel = decompose::peel_universal(&ag);
            let (core_g, core_map) = ag.induced(&peel.core);
            let core = recognizer::recognize_core(&core_g, class)
                .map_err(|e| ColorError::Invariant(format!("core precondition: {e}")))?;
            if let CoreKind::NotInClass { witness } = &core {
                return Err(not_in_class(class, witness, &core_map, &amap, &cmap));
            }
            let core_omega = match &core {
                CoreKind::Complete { size } => *size,
                CoreKind::Blowup { certificate } => {
                    let h = catalog::build(certificate.quotient)
                        .map_err(|e| ColorError::Invariant(e.to_string()))?
                        .graph;
                    weighted_omega(&h, &certificate.bag_sizes())
                }
                CoreKind::NotInClass { .. } => unreachable!(),
            };
            let a_omega = peel.peeled() + core_omega;
            omega = omega.max(a_omega);
            atoms.push(Prepared {
                global: amap.iter().map(|&v| cmap[v]).collect(),
                peel,
                core,
                core_map,
                omega: a_omega,
            });
        }
        components.push((cg, cmap, tree, atoms));
    }

    let (bound, bound_value) = bound_for(class, omega, &labels);
    let mut colors = vec![0usize; g.n()];
    let mut summaries = Vec::new();
    for (cg, cmap, tree, atoms) in components {
        let mut leaf_colorings = Vec::new();
        for atom in atoms {
            let peeled = atom.peel.peeled();
            let budget = bound_value.checked_sub(peeled).ok_or_else(|| {
                ColorError::Invariant(format!(
                    "atom with omega {} exceeds the bound {bound_value}",
                    atom.omega
                ))
            })?;
            let core_c = color_core(&atom.core, atom.core_map.len(), bound, budget)?;
            let mut local = vec![0usize; atom.global.len()];
            let mut next = 1;
            for layer in &atom.peel.layers {
                for v in layer.iter() {
                    local[v] = next;
                    next += 1;
                }
            }
            for (i, &v) in atom.core_map.iter().enumerate() {
                local[v] = peeled + core_c.color(i);
            }
            let lc = Coloring::from_colors(local);
            summaries.push(AtomSummary {
                vertices: atom.global.iter().copied().collect(),
                peeled,
                core: atom.core,
                colors: lc.k(),
            });
            leaf_colorings.push(lc);
        }
        let cc = decompose::recombine(&cg, &tree, &leaf_colorings)
            .map_err(|e| ColorError::Invariant(e.to_string()))?;
        for (i, &v) in cmap.iter().enumerate() {
            colors[v] = cc.color(i);
        }
    }
    let coloring = if g.n() == 0 {
        Coloring::from_colors(Vec::new())
    } else {
        Coloring::from_colors(colors)
    };
    if let Some((u, v)) = coloring.conflict(g) {
        return Err(ColorError::Invariant(format!("edge {u}-{v} is monochromatic")));
    }
    if coloring.k() > bound_value {
        return Err(ColorError::Invariant(format!(
            "{} colours exceed the bound {bound_value}",
            coloring.k()
        )));
    }
    let report = BoundReport {
        class: class.to_string(),
        labels,
        omega,
        bound,
        bound_value,
        colors_used: coloring.k(),
    };
    Ok(ColorOutcome {
        coloring,
        report,
        atoms: summaries,
    })
}

fn not_in_class(
    class: GraphClass,
    witness: &Witness,
    core_map: &[usize],
    amap: &[usize],
    cmap: &[usize],
) -> ColorError {
    match witness {
        Witness::Pattern { pattern, embedding } => ColorError::NotInClass {
            class,
            pattern: *pattern,
            embedding: embedding.iter().map(|&v| cmap[amap[core_map[v]]]).collect(),
        },
        other => ColorError::Invariant(format!("in-class core failed recognition: {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build;
    use crate::graph::uniform_blowup;
    use crate::patterns::Tri;

    fn cls(s: &str) -> GraphClass {
        s.parse().unwrap()
    }

    fn label(c5: Tri, c7: Tri) -> ClassLabel {
        ClassLabel {
            c4free: true,
            c3free: false,
            p7free: true,
            bullfree: true,
            hammerfree: false,
            forkplusfree: true,
            c5sqfree: c5,
            c7q4free: c7,
        }
    }

    #[test]
    fn coloring_normalises() {
        let c = Coloring::from_colors(vec![7, 3, 7, 10]);
        assert_eq!(c.colors(), &[2, 1, 2, 3]);
        assert_eq!(c.k(), 3);
    }

    #[test]
    fn bound_examples() {
        let none = label(Tri::No, Tri::No);
        assert_eq!(bound_for(cls("p7-hammer"), 4, &none), (BoundName::OmegaPlus1, 5));
        assert_eq!(bound_for(cls("fork-bull"), 6, &none), (BoundName::FiveQuarters, 8));
        let both = label(Tri::Yes, Tri::Yes);
        assert_eq!(bound_for(cls("fork-bull"), 8, &both), (BoundName::NineEighths, 9));
        assert_eq!(bound_for(cls("p7-bull"), 8, &both), (BoundName::OmegaPlus1, 9));
        let c5 = label(Tri::Yes, Tri::Unknown);
        assert_eq!(bound_for(cls("fork-bull"), 12, &c5), (BoundName::SevenSixths, 14));
        assert_eq!(bound_for(cls("fork-bull"), 0, &none).1, 0);
    }

    #[test]
    fn pipeline_examples() {
        let petersen = build(CatalogId::F5).unwrap().graph;
        let out = color(&petersen, cls("fork-hammer")).unwrap();
        assert_eq!(out.coloring.k(), 3);
        assert_eq!(out.report.bound_value, 3);

        let c5_3 = uniform_blowup(&Graph::cycle(5), 3);
        let out = color(&c5_3, cls("fork-bull")).unwrap();
        assert_eq!((out.coloring.k(), out.report.bound_value), (8, 8));
        assert!(out.coloring.is_proper(&c5_3));
    }

    #[test]
    fn pipeline_rejects_out_of_class() {
        let err = color(&Graph::cycle(4), cls("p7-bull")).unwrap_err();
        assert!(matches!(err, ColorError::NotInClass { pattern: Pattern::C4, .. }));
    }

    #[test]
    fn petersen_with_apex() {
        let p = build(CatalogId::F5).unwrap().graph;
        let mut g = p.disjoint_union(&Graph::new(1));
        for v in 0..10 {
            g.add_edge(10, v);
        }
        let out = color(&g, cls("fork-hammer")).unwrap();
        assert!(out.coloring.is_proper(&g));
        assert_eq!(out.coloring.k(), 4);
        assert_eq!(out.atoms[0].peeled, 1);
        assert_eq!(crate::testkit::oracle::exact_chi(&g).unwrap(), 4);
    }

    #[test]
    fn petersens_glued_at_a_vertex_leave_the_class() {
        let p = build(CatalogId::F5).unwrap().graph;
        let mut g = Graph::new(19);
        let m = |x: usize| if x == 0 { 0 } else { x + 9 };
        for (u, v) in p.edges() {
            g.add_edge(u, v);
            g.add_edge(m(u), m(v));
        }
        let err = color(&g, cls("fork-hammer")).unwrap_err();
        assert!(matches!(err, ColorError::NotInClass { pattern: Pattern::ForkPlus, .. }));
    }

    #[test]
    fn core_examples() {
        let c = color_core(&CoreKind::Complete { size: 6 }, 6, BoundName::OmegaPlus1, 7).unwrap();
        assert_eq!(c.k(), 6);
        let f0p = build(CatalogId::F0p(2)).unwrap().graph;
        let (g, _) = crate::graph::blowup(&f0p, &[3; 10]);
        let CoreKind::Blowup { certificate } = recognizer::recognize_core(&g, cls("p7-bull")).unwrap() else {
            panic!()
        };
        let c = color_core(&CoreKind::Blowup { certificate }, g.n(), BoundName::FiveQuarters, 8).unwrap();
        assert!(c.is_proper(&g));
        assert_eq!(c.k(), 6);
        let f2 = build(CatalogId::F2(1)).unwrap().graph;
        let out = color(&f2, cls("fork-hammer")).unwrap();
        assert_eq!(out.coloring.k(), 3);
    }
}
