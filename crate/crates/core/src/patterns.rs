//! Forbidden induced subgraphs and class labelling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::decompose;
use crate::graph::{bits, uniform_blowup, Graph, VertexSet};

/// Largest pattern accepted by [`find_induced`].
pub const PATTERN_CAP: usize = 8;

/// Vertex count up to which the 10-vertex `C5^2` is searched for directly.
pub const GENERIC_SQUARE_CAP: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("pattern has {0} vertices, above the cap of {PATTERN_CAP}")]
    TooLarge(usize),
    #[error("unknown class {0:?}, expected one of p7-bull, p7-hammer, fork-bull, fork-hammer")]
    UnknownClass(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pattern {
    C3,
    C4,
    C5,
    C6,
    C7,
    P3,
    P6,
    P7,
    K13,
    Paw,
    Diamond,
    Gem,
    Kite,
    Fork,
    Bull,
    Hammer,
    ForkPlus,
}

impl Pattern {
    pub const ALL: [Pattern; 17] = [
        Pattern::C3,
        Pattern::C4,
        Pattern::C5,
        Pattern::C6,
        Pattern::C7,
        Pattern::P3,
        Pattern::P6,
        Pattern::P7,
        Pattern::K13,
        Pattern::Paw,
        Pattern::Diamond,
        Pattern::Gem,
        Pattern::Kite,
        Pattern::Fork,
        Pattern::Bull,
        Pattern::Hammer,
        Pattern::ForkPlus,
    ];

    pub fn graph(self) -> Graph {
        let edges: &[(usize, usize)] = match self {
            Pattern::C3 => return Graph::cycle(3),
            Pattern::C4 => return Graph::cycle(4),
            Pattern::C5 => return Graph::cycle(5),
            Pattern::C6 => return Graph::cycle(6),
            Pattern::C7 => return Graph::cycle(7),
            Pattern::P3 => return Graph::path(3),
            Pattern::P6 => return Graph::path(6),
            Pattern::P7 => return Graph::path(7),
            Pattern::K13 => &[(0, 1), (0, 2), (0, 3)],
            Pattern::Paw => &[(0, 1), (0, 2), (1, 2), (2, 3)],
            Pattern::Diamond => &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
            Pattern::Gem => &[(0, 1), (1, 2), (2, 3), (4, 0), (4, 1), (4, 2), (4, 3)],
            // diamond with a pendant on a degree-2 vertex
            Pattern::Kite => &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4)],
            Pattern::Fork => &[(0, 1), (0, 2), (0, 3), (3, 4)],
            // triangle abc, pendants a-d and b-e
            Pattern::Bull => &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)],
            // triangle abc, path c-d-e
            Pattern::Hammer => &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)],
            // centre c ~ l1, l2, s1; path s1-s2-l3
            Pattern::ForkPlus => &[(0, 1), (0, 2), (0, 3), (3, 4), (4, 5)],
        };
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Graph::from_edges(n, edges).expect("static pattern")
    }

    pub fn name(self) -> &'static str {
        match self {
            Pattern::C3 => "C3",
            Pattern::C4 => "C4",
            Pattern::C5 => "C5",
            Pattern::C6 => "C6",
            Pattern::C7 => "C7",
            Pattern::P3 => "P3",
            Pattern::P6 => "P6",
            Pattern::P7 => "P7",
            Pattern::K13 => "K13",
            Pattern::Paw => "paw",
            Pattern::Diamond => "diamond",
            Pattern::Gem => "gem",
            Pattern::Kite => "kite",
            Pattern::Fork => "fork",
            Pattern::Bull => "bull",
            Pattern::Hammer => "hammer",
            Pattern::ForkPlus => "forkplus",
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The long forbidden tree of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeKind {
    P7,
    ForkPlus,
}

/// The forbidden graph containing a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriangleKind {
    Bull,
    Hammer,
}

/// One of the four `(C4, F, H)`-free classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphClass {
    pub tree: TreeKind,
    pub triangle: TriangleKind,
}

impl GraphClass {
    pub const ALL: [GraphClass; 4] = [
        GraphClass::new(TreeKind::P7, TriangleKind::Bull),
        GraphClass::new(TreeKind::P7, TriangleKind::Hammer),
        GraphClass::new(TreeKind::ForkPlus, TriangleKind::Bull),
        GraphClass::new(TreeKind::ForkPlus, TriangleKind::Hammer),
    ];

    pub const fn new(tree: TreeKind, triangle: TriangleKind) -> Self {
        GraphClass { tree, triangle }
    }

    /// The patterns whose absence defines the class.
    pub fn forbidden(self) -> [Pattern; 3] {
        let f = match self.tree {
            TreeKind::P7 => Pattern::P7,
            TreeKind::ForkPlus => Pattern::ForkPlus,
        };
        let h = match self.triangle {
            TriangleKind::Bull => Pattern::Bull,
            TriangleKind::Hammer => Pattern::Hammer,
        };
        [Pattern::C4, f, h]
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self.tree {
            TreeKind::P7 => "p7",
            TreeKind::ForkPlus => "fork",
        };
        let h = match self.triangle {
            TriangleKind::Bull => "bull",
            TriangleKind::Hammer => "hammer",
        };
        write!(f, "{t}-{h}")
    }
}

impl FromStr for GraphClass {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let (t, h) = lower
            .split_once('-')
            .ok_or_else(|| PatternError::UnknownClass(s.to_string()))?;
        let tree = match t {
            "p7" => TreeKind::P7,
            "fork" | "forkplus" | "fork+" => TreeKind::ForkPlus,
            _ => return Err(PatternError::UnknownClass(s.to_string())),
        };
        let triangle = match h {
            "bull" => TriangleKind::Bull,
            "hammer" => TriangleKind::Hammer,
            _ => return Err(PatternError::UnknownClass(s.to_string())),
        };
        Ok(GraphClass { tree, triangle })
    }
}

/// Three-valued freeness observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

impl Serialize for Tri {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Tri::Yes => s.serialize_bool(true),
            Tri::No => s.serialize_bool(false),
            Tri::Unknown => s.serialize_str("unknown"),
        }
    }
}

/// Independent freeness observations for one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassLabel {
    pub c4free: bool,
    pub c3free: bool,
    pub p7free: bool,
    pub bullfree: bool,
    pub hammerfree: bool,
    pub forkplusfree: bool,
    pub c5sqfree: Tri,
    pub c7q4free: Tri,
}

impl ClassLabel {
    pub fn in_class(&self, class: GraphClass) -> bool {
        let f = match class.tree {
            TreeKind::P7 => self.p7free,
            TreeKind::ForkPlus => self.forkplusfree,
        };
        let h = match class.triangle {
            TriangleKind::Bull => self.bullfree,
            TriangleKind::Hammer => self.hammerfree,
        };
        self.c4free && f && h
    }

    pub fn classes(&self) -> Vec<GraphClass> {
        GraphClass::ALL
            .into_iter()
            .filter(|&c| self.in_class(c))
            .collect()
    }
}

/// Induced embedding of `p` in `g`, as `pattern vertex -> host vertex`.
pub fn find_induced(g: &Graph, p: Pattern) -> Result<Option<Vec<usize>>, PatternError> {
    let pg = p.graph();
    if pg.n() > PATTERN_CAP {
        return Err(PatternError::TooLarge(pg.n()));
    }
    Ok(find_induced_graph(g, &pg))
}

/// Same search for an arbitrary pattern graph, with no size cap.
///
/// Patterns without adjacent true twins are searched in the true-twin
/// quotient of `g`: such a pattern never puts two of its vertices in one twin
/// class, so it embeds in `g` iff it embeds in the quotient.
pub fn find_induced_graph(g: &Graph, pattern: &Graph) -> Option<Vec<usize>> {
    if pattern.n() > g.n() {
        return None;
    }
    if pattern.n() > 1 && !has_adjacent_twins(pattern) {
        let classes = g.true_twin_classes();
        if classes.len() < g.n() {
            let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
            let q = g.induced_ordered(&reps);
            return search(&q, pattern).map(|m| m.into_iter().map(|v| reps[v]).collect());
        }
    }
    search(g, pattern)
}

fn has_adjacent_twins(g: &Graph) -> bool {
    g.edges()
        .any(|(u, v)| g.closed_neighbor_set(u) == g.closed_neighbor_set(v))
}

/// Backtracking induced-subgraph search. At every level the unmapped pattern
/// vertex with the fewest host candidates is placed next.
fn search(g: &Graph, pattern: &Graph) -> Option<Vec<usize>> {
    let k = pattern.n();
    if k == 0 {
        return Some(Vec::new());
    }
    let stride = g.stride();
    let host_deg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let pat_deg: Vec<usize> = (0..k).map(|v| pattern.degree(v)).collect();
    let mut state = Search {
        g,
        pattern,
        stride,
        host_deg,
        pat_deg,
        map: vec![usize::MAX; k],
        used: vec![0u64; stride],
    };
    if state.extend(0) {
        Some(state.map)
    } else {
        None
    }
}

struct Search<'a> {
    g: &'a Graph,
    pattern: &'a Graph,
    stride: usize,
    host_deg: Vec<usize>,
    pat_deg: Vec<usize>,
    map: Vec<usize>,
    used: Vec<u64>,
}

impl Search<'_> {
    fn candidates(&self, p: usize) -> Vec<u64> {
        let mut cand: Vec<u64> = VertexSet::range(self.g.n()).words().to_vec();
        cand.resize(self.stride, 0);
        for (w, u) in cand.iter_mut().zip(&self.used) {
            *w &= !u;
        }
        for (q, &m) in self.map.iter().enumerate() {
            if m == usize::MAX {
                continue;
            }
            let row = self.g.row(m);
            if self.pattern.has_edge(p, q) {
                for (w, r) in cand.iter_mut().zip(row) {
                    *w &= r;
                }
            } else {
                for (w, r) in cand.iter_mut().zip(row) {
                    *w &= !r;
                }
            }
        }
        cand
    }

    fn extend(&mut self, depth: usize) -> bool {
        let k = self.pattern.n();
        if depth == k {
            return true;
        }
        // most constrained unmapped pattern vertex, preferring ones attached to the mapped part
        let mut best: Option<(usize, Vec<u64>, (bool, usize))> = None;
        for p in 0..k {
            if self.map[p] != usize::MAX {
                continue;
            }
            let attached = self
                .pattern
                .neighbors(p)
                .any(|q| self.map[q] != usize::MAX);
            if depth > 0 && !attached && self.pattern_has_unmapped_attached() {
                continue;
            }
            let cand = self.candidates(p);
            let count: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
            let key = (!attached, count);
            if best.as_ref().is_none_or(|(_, _, bk)| key < *bk) {
                best = Some((p, cand, key));
            }
        }
        let (p, cand, _) = best.expect("an unmapped vertex exists");
        let need = self.pat_deg[p];
        for v in bits(&cand).collect::<Vec<_>>() {
            if self.host_deg[v] < need {
                continue;
            }
            self.map[p] = v;
            self.used[v / 64] |= 1u64 << (v % 64);
            if self.extend(depth + 1) {
                return true;
            }
            self.used[v / 64] &= !(1u64 << (v % 64));
            self.map[p] = usize::MAX;
        }
        false
    }

    fn pattern_has_unmapped_attached(&self) -> bool {
        (0..self.pattern.n()).any(|p| {
            self.map[p] == usize::MAX
                && self.pattern.neighbors(p).any(|q| self.map[q] != usize::MAX)
        })
    }
}

/// First forbidden pattern of `class` found in `g`, with its embedding.
pub fn class_witness(g: &Graph, class: GraphClass) -> Option<(Pattern, Vec<usize>)> {
    class
        .forbidden()
        .into_iter()
        .find_map(|p| find_induced(g, p).expect("class patterns are small").map(|m| (p, m)))
}

/// `C_len^k` as a graph.
pub fn cycle_power(len: usize, k: usize) -> Graph {
    uniform_blowup(&Graph::cycle(len), k)
}

/// Direct search for an induced `C_len^k`.
pub fn contains_cycle_blowup_generic(g: &Graph, len: usize, k: usize) -> bool {
    find_induced_graph(g, &cycle_power(len, k)).is_some()
}

/// Decides containment of an induced `C_len^k` (`len >= 5`) through the
/// clique-cutset decomposition: the pattern has no clique cutset and no
/// universal vertex, so it sits inside one atom's core; if that core's twin
/// quotient is triangle-free, the pattern is present iff the quotient has an
/// induced `C_len` whose bags all hold at least `k` vertices.
///
/// `None` when some core has a quotient with a triangle.
pub fn contains_cycle_blowup_structural(g: &Graph, len: usize, k: usize) -> Option<bool> {
    let cycle = Graph::cycle(len);
    for comp in g.components() {
        let (cg, _) = g.induced(&comp);
        let tree = decompose::decompose(&cg).expect("component is connected");
        for atom in tree.leaves() {
            let (ag, _) = cg.induced(atom);
            let peel = decompose::peel_universal(&ag);
            if peel.core_complete || peel.core.is_empty() {
                continue;
            }
            let (core, _) = ag.induced(&peel.core);
            let classes = core.true_twin_classes();
            let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
            let q = core.induced_ordered(&reps);
            if find_induced_graph(&q, &Graph::cycle(3)).is_some() {
                return None;
            }
            let heavy: Vec<usize> = (0..q.n()).filter(|&i| classes[i].len() >= k).collect();
            if heavy.len() < len {
                continue;
            }
            if find_induced_graph(&q.induced_ordered(&heavy), &cycle).is_some() {
                return Some(true);
            }
        }
    }
    Some(false)
}

fn cycle_blowup_free(g: &Graph, len: usize, k: usize) -> Tri {
    if g.n() < len * k {
        return Tri::Yes;
    }
    if g.n() <= GENERIC_SQUARE_CAP {
        return (!contains_cycle_blowup_generic(g, len, k)).into();
    }
    match contains_cycle_blowup_structural(g, len, k) {
        Some(found) => (!found).into(),
        None => Tri::Unknown,
    }
}

/// Exhaustive freeness labels of `g`.
pub fn classify(g: &Graph) -> ClassLabel {
    let free = |p: Pattern| {
        find_induced(g, p)
            .expect("label patterns are small")
            .is_none()
    };
    ClassLabel {
        c4free: free(Pattern::C4),
        c3free: free(Pattern::C3),
        p7free: free(Pattern::P7),
        bullfree: free(Pattern::Bull),
        hammerfree: free(Pattern::Hammer),
        forkplusfree: free(Pattern::ForkPlus),
        c5sqfree: cycle_blowup_free(g, 5, 2),
        c7q4free: cycle_blowup_free(g, 7, 4),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, CatalogId};
    use proptest::prelude::*;

    fn is_induced_embedding(g: &Graph, p: &Graph, m: &[usize]) -> bool {
        let distinct = m.iter().collect::<std::collections::HashSet<_>>().len() == m.len();
        distinct
            && (0..p.n()).all(|a| {
                (0..p.n())
                    .filter(|&b| b != a)
                    .all(|b| p.has_edge(a, b) == g.has_edge(m[a], m[b]))
            })
    }

    /// Every injective placement of the pattern, tried blindly.
    fn brute_force_contains(g: &Graph, p: &Graph) -> bool {
        fn rec(g: &Graph, p: &Graph, m: &mut Vec<usize>) -> bool {
            if m.len() == p.n() {
                return is_induced_embedding(g, p, m);
            }
            for v in 0..g.n() {
                if !m.contains(&v) {
                    m.push(v);
                    let i = m.len() - 1;
                    let ok = (0..i).all(|j| p.has_edge(i, j) == g.has_edge(m[i], m[j]));
                    if ok && rec(g, p, m) {
                        return true;
                    }
                    m.pop();
                }
            }
            false
        }
        rec(g, p, &mut Vec::new())
    }

    #[test]
    fn pattern_shapes() {
        for p in Pattern::ALL {
            let g = p.graph();
            assert!(g.is_connected(), "{p}");
        }
        let bull = Pattern::Bull.graph();
        assert_eq!((bull.n(), bull.edge_count()), (5, 5));
        assert_eq!(bull.degree_sequence(), vec![1, 1, 2, 3, 3]);
        let hammer = Pattern::Hammer.graph();
        assert_eq!((hammer.n(), hammer.edge_count()), (5, 5));
        assert_eq!(hammer.degree_sequence(), vec![1, 2, 2, 2, 3]);
        let fp = Pattern::ForkPlus.graph();
        assert_eq!((fp.n(), fp.edge_count()), (6, 5));
        assert_eq!(fp.degree_sequence(), vec![1, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn bull_in_bull() {
        let bull = Pattern::Bull.graph();
        let m = find_induced(&bull, Pattern::Bull).unwrap().unwrap();
        assert!(is_induced_embedding(&bull, &bull, &m));
    }

    #[test]
    fn petersen_is_c4_free() {
        let petersen = build(CatalogId::F5).unwrap().graph;
        assert_eq!(find_induced(&petersen, Pattern::C4).unwrap(), None);
        assert_eq!(find_induced(&petersen, Pattern::C3).unwrap(), None);
        assert_eq!(find_induced(&petersen, Pattern::P7).unwrap(), None);
    }

    #[test]
    fn f7_is_p7_free() {
        let f7 = build(CatalogId::F7).unwrap().graph;
        assert_eq!(find_induced(&f7, Pattern::P7).unwrap(), None);
        assert!(!brute_force_contains(&f7, &Pattern::P7.graph()));
    }

    #[test]
    fn oversized_pattern_rejected() {
        assert!(find_induced_graph(&Graph::cycle(10), &Graph::cycle(9)).is_none());
        assert!(matches!(
            find_induced(&Graph::cycle(3), Pattern::P7),
            Ok(None)
        ));
    }

    #[test]
    fn classify_examples() {
        let sq = cycle_power(5, 2);
        assert_eq!(classify(&sq).c5sqfree, Tri::No);
        let petersen = build(CatalogId::F5).unwrap().graph;
        let l = classify(&petersen);
        assert!(l.c4free && l.c3free && l.bullfree && l.hammerfree);
        assert!(l.p7free && l.forkplusfree);
        let k1 = classify(&Graph::new(1));
        assert!(k1.c4free && k1.c3free && k1.p7free && k1.bullfree);
        assert!(k1.hammerfree && k1.forkplusfree);
        assert_eq!((k1.c5sqfree, k1.c7q4free), (Tri::Yes, Tri::Yes));
    }

    #[test]
    fn c7_fourth_power_found_structurally() {
        let g = cycle_power(7, 4);
        assert_eq!(classify(&g).c7q4free, Tri::No);
        let g3 = cycle_power(7, 3);
        let l = classify(&g3);
        assert_eq!(l.c7q4free, Tri::Yes);
        assert_eq!(l.c5sqfree, Tri::Yes);
    }

    #[test]
    fn unknown_on_large_uncertified() {
        // a wheel-like core: C5 blown up plus a triangle hanging on a C6 of
        // K4s, beyond the generic cap and with a triangle in its quotient
        let mut g = Graph::new(30);
        for i in 0..30 {
            for j in i + 1..30 {
                if (j - i) % 30 <= 2 || (i + 30 - j) % 30 <= 2 {
                    g.add_edge(i, j);
                }
            }
        }
        assert_eq!(classify(&g).c5sqfree, Tri::Unknown);
    }

    #[test]
    fn class_parsing() {
        assert_eq!(
            "p7-hammer".parse::<GraphClass>().unwrap(),
            GraphClass::new(TreeKind::P7, TriangleKind::Hammer)
        );
        assert_eq!(
            "fork-bull".parse::<GraphClass>().unwrap().to_string(),
            "fork-bull"
        );
        assert!("p6-bull".parse::<GraphClass>().is_err());
    }

    fn arb_small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut g = Graph::new(n);
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
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
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn agrees_with_brute_force(g in arb_small_graph(9)) {
            for p in Pattern::ALL {
                let pg = p.graph();
                let found = find_induced(&g, p).unwrap();
                if let Some(m) = &found {
                    prop_assert!(is_induced_embedding(&g, &pg, m), "{} bad embedding", p);
                }
                prop_assert_eq!(found.is_some(), brute_force_contains(&g, &pg), "{}", p);
            }
        }

        #[test]
        fn adding_isolated_vertex_keeps_embedding(g in arb_small_graph(8)) {
            let bigger = g.disjoint_union(&Graph::new(1));
            for p in Pattern::ALL {
                if find_induced(&g, p).unwrap().is_some() {
                    prop_assert!(find_induced(&bigger, p).unwrap().is_some());
                }
            }
        }

        #[test]
        fn square_detection_routes_agree(
            id in prop_oneof![
                Just(CatalogId::Cycle(5)), Just(CatalogId::Cycle(6)),
                Just(CatalogId::Cycle(7)), Just(CatalogId::F2(1)), Just(CatalogId::F3),
                Just(CatalogId::F4), Just(CatalogId::F5), Just(CatalogId::F7),
                Just(CatalogId::F8), Just(CatalogId::F9), Just(CatalogId::F10),
                Just(CatalogId::F11), Just(CatalogId::F12), Just(CatalogId::F0p(1))
            ],
            sizes in proptest::collection::vec(1usize..=3, 11),
        ) {
            let h = build(id).unwrap().graph;
            let mut s: Vec<usize> = sizes.into_iter().take(h.n()).collect();
            s.resize(h.n(), 1);
            let (g, _) = crate::graph::blowup(&h, &s);
            prop_assume!(g.n() <= GENERIC_SQUARE_CAP);
            let generic = contains_cycle_blowup_generic(&g, 5, 2);
            prop_assert_eq!(contains_cycle_blowup_structural(&g, 5, 2), Some(generic));
        }
    }
}
