//! Certification of atoms as complete graphs or clique blowups of catalog graphs.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::catalog::{self, CatalogId};
use crate::decompose;
use crate::graph::{Graph, VertexSet};
use crate::patterns::{class_witness, GraphClass, Pattern, TriangleKind, TreeKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognizeError {
    #[error("core is disconnected")]
    Disconnected,
    #[error("core has a clique cutset {0:?}")]
    CliqueCutset(Vec<usize>),
    #[error("core has a universal vertex {0}")]
    UniversalVertex(usize),
}

/// True-twin quotient: the graph on class representatives and the classes.
pub fn twin_quotient(g: &Graph) -> (Graph, Vec<Vec<usize>>) {
    let classes = g.true_twin_classes();
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    (g.induced_ordered(&reps), classes)
}

/// Proof that a graph is a nonempty clique blowup of a catalog graph.
/// `bags[i]` is the bag of catalog vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupCertificate {
    pub quotient: CatalogId,
    pub bags: Vec<VertexSet>,
}

impl BlowupCertificate {
    pub fn bag_sizes(&self) -> Vec<usize> {
        self.bags.iter().map(VertexSet::len).collect()
    }

    /// Direct edge scan against the definition of a clique blowup.
    pub fn validate(&self, g: &Graph) -> bool {
        let Ok(cg) = catalog::build(self.quotient) else {
            return false;
        };
        let h = cg.graph;
        if h.n() != self.bags.len() || self.bags.iter().any(VertexSet::is_empty) {
            return false;
        }
        let mut owner = vec![usize::MAX; g.n()];
        for (i, bag) in self.bags.iter().enumerate() {
            for v in bag.iter() {
                if v >= g.n() || owner[v] != usize::MAX {
                    return false;
                }
                owner[v] = i;
            }
        }
        if owner.contains(&usize::MAX) {
            return false;
        }
        (0..g.n()).all(|u| {
            (u + 1..g.n()).all(|v| {
                let expect = owner[u] == owner[v] || h.has_edge(owner[u], owner[v]);
                g.has_edge(u, v) == expect
            })
        })
    }
}

impl Serialize for BlowupCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            quotient: &'a CatalogId,
            bags: &'a [VertexSet],
            bag_sizes: Vec<usize>,
        }
        Doc {
            quotient: &self.quotient,
            bags: &self.bags,
            bag_sizes: self.bag_sizes(),
        }
        .serialize(s)
    }
}

/// Why a core is outside a class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A forbidden induced subgraph, as `pattern vertex -> graph vertex`.
    Pattern {
        pattern: Pattern,
        embedding: Vec<usize>,
    },
    /// The twin quotient matched no catalog graph.
    UnmatchedQuotient { quotient_vertices: usize, quotient_edges: usize },
    /// The quotient is a catalog graph not allowed for the class.
    OutsideClassCatalog { quotient: CatalogId },
    /// Hammer classes allow only unit bags.
    NonUnitBags { quotient: CatalogId, bag_sizes: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoreKind {
    Complete { size: usize },
    Blowup { certificate: BlowupCertificate },
    NotInClass { witness: Witness },
}

/// Catalog id of `h` up to isomorphism.
pub fn match_catalog(h: &Graph) -> Option<CatalogId> {
    match_catalog_with_map(h).map(|(id, _)| id)
}

/// Catalog id of `h` with an isomorphism `h vertex -> catalog vertex`.
pub fn match_catalog_with_map(h: &Graph) -> Option<(CatalogId, Vec<usize>)> {
    let n = h.n();
    if n < 5 || !h.is_connected() {
        return None;
    }
    if (0..n).all(|v| h.degree(v) == 2) {
        return Some((CatalogId::Cycle(n), cycle_walk(h)));
    }
    if n % 2 == 1 {
        if let Some(m) = match_rungs(h, (n - 5) / 2, true) {
            return Some((CatalogId::F2((n - 5) / 2), m));
        }
    } else if n >= 8 {
        if let Some(m) = match_rungs(h, (n - 6) / 2, false) {
            return Some((CatalogId::F0p((n - 6) / 2), m));
        }
    }
    for id in CatalogId::FIXED {
        if id.vertex_count() != n {
            continue;
        }
        let target = catalog::build(id).expect("fixed ids are valid").graph;
        if let Some(m) = catalog::isomorphism(h, &target) {
            return Some((id, m));
        }
    }
    None
}

fn cycle_walk(h: &Graph) -> Vec<usize> {
    let n = h.n();
    let mut label = vec![usize::MAX; n];
    let (mut prev, mut cur) = (usize::MAX, 0);
    for i in 0..n {
        label[cur] = i;
        let next = h
            .neighbors(cur)
            .find(|&x| x != prev && label[x] == usize::MAX)
            .unwrap_or(0);
        prev = cur;
        cur = next;
    }
    label
}

/// Recognises the two families built from two poles `p`, `q` joined by
/// internally disjoint paths of length 3 ("rungs"): `F2(t)` has `t + 1`
/// rungs and one common neighbour of the poles, `F0'(t)` has `t + 2` rungs.
fn match_rungs(h: &Graph, t: usize, with_middle: bool) -> Option<Vec<usize>> {
    if t == 0 {
        return None;
    }
    let rungs = if with_middle { t + 1 } else { t + 2 };
    let n = h.n();
    let pole_degree = rungs + usize::from(with_middle);
    let poles: Vec<usize> = (0..n).filter(|&v| h.degree(v) == pole_degree).collect();
    for (i, &p) in poles.iter().enumerate() {
        for &q in &poles[i + 1..] {
            if h.has_edge(p, q) {
                continue;
            }
            for (p, q) in [(p, q), (q, p)] {
                if let Some(m) = rung_map(h, p, q, t, with_middle) {
                    return Some(m);
                }
            }
        }
    }
    None
}

fn rung_map(h: &Graph, p: usize, q: usize, t: usize, with_middle: bool) -> Option<Vec<usize>> {
    let n = h.n();
    let mut middle = None;
    let mut rungs: Vec<(usize, usize)> = Vec::new();
    for a in h.neighbors(p) {
        if h.has_edge(a, q) {
            if !with_middle || middle.is_some() || h.degree(a) != 2 {
                return None;
            }
            middle = Some(a);
            continue;
        }
        if h.degree(a) != 2 {
            return None;
        }
        let b = h.neighbors(a).find(|&x| x != p)?;
        if b == q || !h.has_edge(b, q) || h.degree(b) != 2 {
            return None;
        }
        rungs.push((a, b));
    }
    if with_middle != middle.is_some() {
        return None;
    }
    let expected = if with_middle { t + 1 } else { t + 2 };
    if rungs.len() != expected || h.degree(q) != h.degree(p) {
        return None;
    }
    let mut label = vec![usize::MAX; n];
    let mut assign = |v: usize, l: usize| -> bool {
        if label[v] != usize::MAX {
            return false;
        }
        label[v] = l;
        true
    };
    let mut ok = assign(p, 0);
    let extra_start;
    if let Some(m) = middle {
        // F2: p = 0, m = 1, q = 2, first rung = (4, 3)
        ok &= assign(m, 1) && assign(q, 2) && assign(rungs[0].0, 4) && assign(rungs[0].1, 3);
        extra_start = 1;
        for (i, &(a, b)) in rungs[extra_start..].iter().enumerate() {
            ok &= assign(a, 5 + 2 * i) && assign(b, 6 + 2 * i);
        }
    } else {
        // F0': p = 0, q = 3, rungs (1, 2) and (5, 4)
        ok &= assign(q, 3)
            && assign(rungs[0].0, 1)
            && assign(rungs[0].1, 2)
            && assign(rungs[1].0, 5)
            && assign(rungs[1].1, 4);
        extra_start = 2;
        for (i, &(a, b)) in rungs[extra_start..].iter().enumerate() {
            ok &= assign(a, 6 + 2 * i) && assign(b, 7 + 2 * i);
        }
    }
    if !ok || label.contains(&usize::MAX) {
        return None;
    }
    let id = if with_middle {
        CatalogId::F2(t)
    } else {
        CatalogId::F0p(t)
    };
    let target = catalog::build(id).ok()?.graph;
    let preserved = h.edge_count() == target.edge_count()
        && h.edges().all(|(u, v)| target.has_edge(label[u], label[v]));
    preserved.then_some(label)
}

/// Allowed quotient ids for the class.
pub fn class_allows(class: GraphClass, id: CatalogId) -> bool {
    match class.tree {
        TreeKind::P7 => id.in_p7_catalog(),
        TreeKind::ForkPlus => id.in_forkplus_catalog(),
    }
}

/// Certifies an atom without universal vertices.
pub fn recognize_core(g: &Graph, class: GraphClass) -> Result<CoreKind, RecognizeError> {
    if g.n() == 0 {
        return Ok(CoreKind::Complete { size: 0 });
    }
    if !g.is_connected() {
        return Err(RecognizeError::Disconnected);
    }
    if g.is_complete() {
        return Ok(CoreKind::Complete { size: g.n() });
    }
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) + 1 == g.n()) {
        return Err(RecognizeError::UniversalVertex(v));
    }
    if let Some(k) = decompose::find_clique_cutset(g).expect("connected") {
        return Err(RecognizeError::CliqueCutset(k.to_vec()));
    }
    if let Some((pattern, embedding)) = class_witness(g, class) {
        return Ok(CoreKind::NotInClass {
            witness: Witness::Pattern { pattern, embedding },
        });
    }
    Ok(certify_blowup(g, class))
}

fn certify_blowup(g: &Graph, class: GraphClass) -> CoreKind {
    let (q, classes) = twin_quotient(g);
    let Some((id, map)) = match_catalog_with_map(&q) else {
        return CoreKind::NotInClass {
            witness: Witness::UnmatchedQuotient {
                quotient_vertices: q.n(),
                quotient_edges: q.edge_count(),
            },
        };
    };
    if !class_allows(class, id) {
        return CoreKind::NotInClass {
            witness: Witness::OutsideClassCatalog { quotient: id },
        };
    }
    let mut bags = vec![VertexSet::new(); q.n()];
    for (i, c) in classes.into_iter().enumerate() {
        bags[map[i]] = c.into_iter().collect();
    }
    let certificate = BlowupCertificate { quotient: id, bags };
    if class.triangle == TriangleKind::Hammer && certificate.bags.iter().any(|b| b.len() > 1) {
        return CoreKind::NotInClass {
            witness: Witness::NonUnitBags {
                quotient: id,
                bag_sizes: certificate.bag_sizes(),
            },
        };
    }
    CoreKind::Blowup { certificate }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    InClassAndCertified,
    InClassButExcludedByHypothesis,
    NotInClass,
    Counterexample,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::InClassAndCertified => "in-class-and-certified",
            Verdict::InClassButExcludedByHypothesis => "in-class-but-excluded-by-hypothesis",
            Verdict::NotInClass => "not-in-class",
            Verdict::Counterexample => "COUNTEREXAMPLE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub class: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<CoreKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Checks the structure theorem for `class` on `g`.
pub fn verify_structure_theorem(g: &Graph, class: GraphClass) -> StructureReport {
    let mut report = StructureReport {
        class: class.to_string(),
        verdict: Verdict::NotInClass,
        core: None,
        witness: None,
        reason: None,
    };
    if let Some((pattern, embedding)) = class_witness(g, class) {
        report.witness = Some(Witness::Pattern { pattern, embedding });
        return report;
    }
    if g.n() > 0 && g.is_complete() {
        report.verdict = Verdict::InClassAndCertified;
        report.core = Some(CoreKind::Complete { size: g.n() });
        return report;
    }
    let excluded = |reason: String| StructureReport {
        verdict: Verdict::InClassButExcludedByHypothesis,
        reason: Some(reason),
        ..report.clone()
    };
    if g.n() == 0 || !g.is_connected() {
        return excluded("disconnected".into());
    }
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) + 1 == g.n()) {
        return excluded(format!("universal vertex {v}"));
    }
    if let Some(k) = decompose::find_clique_cutset(g).expect("connected") {
        return excluded(format!("clique cutset {:?}", k.to_vec()));
    }
    match recognize_core(g, class) {
        Ok(core @ (CoreKind::Complete { .. } | CoreKind::Blowup { .. })) => {
            report.verdict = Verdict::InClassAndCertified;
            report.core = Some(core);
        }
        Ok(CoreKind::NotInClass { witness }) => {
            report.verdict = Verdict::Counterexample;
            report.witness = Some(witness);
        }
        Err(e) => {
            report.verdict = Verdict::Counterexample;
            report.reason = Some(e.to_string());
        }
    }
    report
}
