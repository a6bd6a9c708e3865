//! The catalog of triangle-free quotient graphs.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::decompose;
use crate::graph::Graph;
use crate::patterns::{self, find_induced_graph, Pattern};

/// Largest accepted family parameter.
pub const PARAM_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("invalid parameter {param} for {family}")]
    InvalidParameter { family: &'static str, param: usize },
    #[error("unknown catalog id {0:?}")]
    UnknownId(String),
}

/// A catalog member. `F0 = C6`, `F1 = C5`, `F6 = C7` and `F2' = F2(1)` are
/// accepted on input and normalised to those forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogId {
    Cycle(usize),
    F0p(usize),
    F2(usize),
    F3,
    F4,
    F5,
    F7,
    F8,
    F9,
    F10,
    F11,
    F12,
}

impl CatalogId {
    /// Members with a fixed vertex count (cycles and families excluded).
    pub const FIXED: [CatalogId; 9] = [
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

    pub fn vertex_count(self) -> usize {
        match self {
            CatalogId::Cycle(k) => k,
            CatalogId::F0p(t) => 6 + 2 * t,
            CatalogId::F2(t) => 5 + 2 * t,
            CatalogId::F3 => 8,
            CatalogId::F4 => 9,
            CatalogId::F5 => 10,
            CatalogId::F7 => 8,
            CatalogId::F8 | CatalogId::F10 => 9,
            CatalogId::F9 | CatalogId::F11 => 10,
            CatalogId::F12 => 11,
        }
    }

    /// Allowed quotients for the fork+ classes.
    pub fn in_forkplus_catalog(self) -> bool {
        matches!(
            self,
            CatalogId::F2(1) | CatalogId::F3 | CatalogId::F4 | CatalogId::F5
        ) || matches!(self, CatalogId::Cycle(k) if k >= 5)
    }

    /// Allowed quotients for the P7 classes.
    pub fn in_p7_catalog(self) -> bool {
        match self {
            CatalogId::Cycle(k) => (5..=7).contains(&k),
            _ => true,
        }
    }

    pub fn is_bipartite(self) -> bool {
        match self {
            CatalogId::Cycle(k) => k % 2 == 0,
            CatalogId::F0p(_) => true,
            _ => false,
        }
    }

    fn validate(self) -> Result<(), CatalogError> {
        match self {
            CatalogId::Cycle(k) if !(4..=PARAM_CAP).contains(&k) => {
                Err(CatalogError::InvalidParameter { family: "C", param: k })
            }
            CatalogId::F0p(t) if !(1..=PARAM_CAP).contains(&t) => {
                Err(CatalogError::InvalidParameter { family: "F0'", param: t })
            }
            CatalogId::F2(t) if !(1..=PARAM_CAP).contains(&t) => {
                Err(CatalogError::InvalidParameter { family: "F2", param: t })
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogId::Cycle(k) => write!(f, "C{k}"),
            CatalogId::F0p(t) => write!(f, "F0'({t})"),
            CatalogId::F2(t) => write!(f, "F2({t})"),
            CatalogId::F3 => f.write_str("F3"),
            CatalogId::F4 => f.write_str("F4"),
            CatalogId::F5 => f.write_str("F5"),
            CatalogId::F7 => f.write_str("F7"),
            CatalogId::F8 => f.write_str("F8"),
            CatalogId::F9 => f.write_str("F9"),
            CatalogId::F10 => f.write_str("F10"),
            CatalogId::F11 => f.write_str("F11"),
            CatalogId::F12 => f.write_str("F12"),
        }
    }
}

impl FromStr for CatalogId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || CatalogError::UnknownId(s.to_string());
        let t = s.trim();
        let upper = t.to_ascii_uppercase();
        let param = |body: &str| -> Result<usize, CatalogError> {
            let inner = body
                .strip_prefix('(')
                .and_then(|b| b.strip_suffix(')'))
                .unwrap_or(body);
            inner.trim().parse::<usize>().map_err(|_| unknown())
        };
        let id = match upper.as_str() {
            "F0" => CatalogId::Cycle(6),
            "F1" => CatalogId::Cycle(5),
            "F6" => CatalogId::Cycle(7),
            "F2" | "F2'" | "F2P" => CatalogId::F2(1),
            "F3" => CatalogId::F3,
            "F4" => CatalogId::F4,
            "F5" | "PETERSEN" => CatalogId::F5,
            "F7" => CatalogId::F7,
            "F8" => CatalogId::F8,
            "F9" => CatalogId::F9,
            "F10" => CatalogId::F10,
            "F11" => CatalogId::F11,
            "F12" => CatalogId::F12,
            _ => {
                if let Some(rest) = upper.strip_prefix("F0'").or_else(|| upper.strip_prefix("F0P")) {
                    CatalogId::F0p(param(rest)?)
                } else if let Some(rest) = upper.strip_prefix("F2") {
                    CatalogId::F2(param(rest)?)
                } else if let Some(rest) = upper.strip_prefix("CYCLE") {
                    CatalogId::Cycle(param(rest)?)
                } else if let Some(rest) = upper.strip_prefix('C') {
                    CatalogId::Cycle(param(rest)?)
                } else {
                    return Err(unknown());
                }
            }
        };
        id.validate()?;
        Ok(id)
    }
}

impl Serialize for CatalogId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CatalogId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CatalogMeta {
    pub omega: usize,
    pub chi: usize,
    pub girth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogGraph {
    pub id: CatalogId,
    pub graph: Graph,
    pub meta: CatalogMeta,
}

fn with_edges(mut g: Graph, edges: &[(usize, usize)]) -> Graph {
    for &(u, v) in edges {
        g.add_edge(u, v);
    }
    g
}

fn grow(base: Graph, extra: usize, edges: &[(usize, usize)]) -> Graph {
    let g = base.disjoint_union(&Graph::new(extra));
    with_edges(g, edges)
}

/// Cycle `0..len` plus `t` paths `anchor_a - y_i - z_i - anchor_b`, with
/// `y_i = len + 2i` and `z_i = len + 2i + 1`.
fn cycle_with_rungs(len: usize, t: usize, anchor_a: usize, anchor_b: usize) -> Graph {
    let mut g = Graph::cycle(len).disjoint_union(&Graph::new(2 * t));
    for i in 0..t {
        let (y, z) = (len + 2 * i, len + 2 * i + 1);
        g.add_edge(y, anchor_a);
        g.add_edge(z, anchor_b);
        g.add_edge(y, z);
    }
    g
}

fn raw_graph(id: CatalogId) -> Graph {
    let c5 = || Graph::cycle(5);
    let c7 = || Graph::cycle(7);
    match id {
        CatalogId::Cycle(k) => Graph::cycle(k),
        CatalogId::F0p(t) => cycle_with_rungs(6, t, 0, 3),
        CatalogId::F2(t) => cycle_with_rungs(5, t, 0, 2),
        CatalogId::F3 => grow(c5(), 3, &[(5, 0), (6, 2), (7, 3), (5, 6), (5, 7)]),
        CatalogId::F4 => grow(raw_graph(CatalogId::F3), 1, &[(8, 1), (8, 7)]),
        CatalogId::F5 => {
            let mut g = grow(c5(), 5, &[]);
            for i in 0..5 {
                g.add_edge(5 + i, i);
                g.add_edge(5 + i, 5 + (i + 2) % 5);
            }
            g
        }
        CatalogId::F7 => grow(c7(), 1, &[(7, 0), (7, 3)]),
        CatalogId::F8 => grow(raw_graph(CatalogId::F7), 1, &[(8, 1), (8, 4)]),
        CatalogId::F9 => grow(raw_graph(CatalogId::F8), 1, &[(9, 7), (9, 8)]),
        CatalogId::F10 => grow(raw_graph(CatalogId::F7), 1, &[(8, 4), (8, 0)]),
        CatalogId::F11 => grow(raw_graph(CatalogId::F8), 1, &[(9, 4), (9, 0)]),
        CatalogId::F12 => grow(raw_graph(CatalogId::F11), 1, &[(10, 7), (10, 8)]),
    }
}

/// Length of a shortest cycle, 0 for forests.
pub fn girth(g: &Graph) -> usize {
    let n = g.n();
    let mut best = usize::MAX;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    best = best.min(dist[u] + dist[v] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        0
    } else {
        best
    }
}

pub fn build(id: CatalogId) -> Result<CatalogGraph, CatalogError> {
    id.validate()?;
    let graph = raw_graph(id);
    let meta = CatalogMeta {
        omega: 2,
        chi: if id.is_bipartite() { 2 } else { 3 },
        girth: girth(&graph),
    };
    Ok(CatalogGraph { id, graph, meta })
}

/// Isomorphism `a -> b` as a vertex map, if one exists.
pub fn isomorphism(a: &Graph, b: &Graph) -> Option<Vec<usize>> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return None;
    }
    if a.degree_sequence() != b.degree_sequence() {
        return None;
    }
    find_induced_graph(b, a)
}

/// Two colours from `1..=5` per vertex of the F12 quotient, proper on its
/// 2-blowup. Vertices `0..7` are the 7-cycle, `7` and `8` the attachments on
/// `{0,3}` and `{1,4}`, `9` the attachment on `{4,0}`, `10` the vertex over
/// `7` and `8`.
const F12_TABLE: [[u8; 2]; 11] = [
    [1, 5],
    [3, 4],
    [1, 2],
    [3, 5],
    [1, 4],
    [2, 5],
    [3, 4],
    [2, 4],
    [2, 5],
    [2, 3],
    [1, 3],
];

/// Petersen table: the outer cycle then the inner vertices, each vertex
/// receiving a 2-subset of `1..=5` with adjacent vertices disjoint.
const F5_TABLE: [[u8; 2]; 10] = [
    [1, 2],
    [3, 4],
    [1, 5],
    [2, 3],
    [4, 5],
    [3, 5],
    [2, 5],
    [2, 4],
    [1, 4],
    [1, 3],
];

fn f2_table(t: usize) -> Vec<[u8; 2]> {
    let mut table = vec![[1, 2], [4, 5], [2, 3], [5, 1], [3, 4]];
    for _ in 0..t {
        table.push([3, 4]);
        table.push([1, 5]);
    }
    table
}

fn restricted(host: CatalogId, host_table: &[[u8; 2]], id: CatalogId) -> Vec<[u8; 2]> {
    let g = raw_graph(id);
    let m = find_induced_graph(&raw_graph(host), &g).expect("catalog member embeds in its host");
    m.into_iter().map(|v| host_table[v]).collect()
}

/// Proper 5-coloring of the uniform 2-blowup of `id`, as two colours per
/// quotient vertex, when the catalog provides one.
pub fn two_blowup_table(id: CatalogId) -> Option<Vec<[u8; 2]>> {
    static FIXED: OnceLock<Vec<(CatalogId, Vec<[u8; 2]>)>> = OnceLock::new();
    if let CatalogId::F2(t) = id {
        return Some(f2_table(t));
    }
    let tables = FIXED.get_or_init(|| {
        let mut out = vec![
            (CatalogId::F5, F5_TABLE.to_vec()),
            (CatalogId::F12, F12_TABLE.to_vec()),
        ];
        for id in [CatalogId::F3, CatalogId::F4, CatalogId::Cycle(5), CatalogId::Cycle(6)] {
            out.push((id, restricted(CatalogId::F5, &F5_TABLE, id)));
        }
        for id in [
            CatalogId::Cycle(7),
            CatalogId::F7,
            CatalogId::F8,
            CatalogId::F9,
            CatalogId::F10,
            CatalogId::F11,
        ] {
            out.push((id, restricted(CatalogId::F12, &F12_TABLE, id)));
        }
        out
    });
    tables
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, t)| t.clone())
}

/// One named check of [`self_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfCheckReport {
    pub items: Vec<CheckItem>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.items.iter().filter(|i| !i.passed).collect()
    }
}

/// Catalog members of bounded size used by [`self_check`] and tests.
pub fn sample_members() -> Vec<CatalogId> {
    let mut ids: Vec<CatalogId> = (5..=9).map(CatalogId::Cycle).collect();
    ids.extend((1..=3).map(CatalogId::F0p));
    ids.extend((1..=3).map(CatalogId::F2));
    ids.extend(CatalogId::FIXED);
    ids
}

/// Whether `g` is a proper target for the induction tables: every vertex
/// receives two colours, disjoint across edges.
pub fn table_is_proper(g: &Graph, table: &[[u8; 2]]) -> bool {
    table.len() == g.n()
        && table.iter().all(|p| p[0] != p[1] && (1..=5).contains(&p[0]) && (1..=5).contains(&p[1]))
        && g.edges().all(|(u, v)| table[u].iter().all(|c| !table[v].contains(c)))
}

/// Verifies the catalog: induced containments among the members, the
/// structural invariants of each member, the F12 / Petersen relation and the
/// 2-blowup tables.
pub fn self_check() -> SelfCheckReport {
    let mut items = Vec::new();
    let mut push = |name: String, passed: bool| items.push(CheckItem { name, passed });
    let f5 = raw_graph(CatalogId::F5);
    let f12 = raw_graph(CatalogId::F12);
    for id in [
        CatalogId::Cycle(6),
        CatalogId::Cycle(5),
        CatalogId::F2(1),
        CatalogId::F3,
        CatalogId::F4,
    ] {
        let found = find_induced_graph(&f5, &raw_graph(id)).is_some();
        push(format!("{id} embeds in F5"), found);
    }
    for id in [
        CatalogId::Cycle(7),
        CatalogId::F7,
        CatalogId::F8,
        CatalogId::F9,
        CatalogId::F10,
        CatalogId::F11,
    ] {
        let found = find_induced_graph(&f12, &raw_graph(id)).is_some();
        push(format!("{id} embeds in F12"), found);
    }
    push(
        "F5 does not embed in F12".into(),
        find_induced_graph(&f12, &f5).is_none(),
    );
    let petersen_minus = f5.induced(&(1..10).collect()).0;
    let pair = f12
        .edges()
        .find(|&(u, v)| {
            let keep = (0..11).filter(|&w| w != u && w != v).collect();
            isomorphism(&f12.induced(&keep).0, &petersen_minus).is_some()
        });
    push(
        "F12 minus an adjacent pair is F5 minus a vertex".into(),
        pair.is_some(),
    );
    for id in sample_members() {
        let cg = build(id).expect("sample ids are valid");
        let g = &cg.graph;
        let ok = g.is_connected()
            && patterns::find_induced(g, Pattern::C3).unwrap().is_none()
            && patterns::find_induced(g, Pattern::C4).unwrap().is_none()
            && decompose::find_clique_cutset(g).unwrap().is_none()
            && decompose::peel_universal(g).layers.is_empty()
            && cg.meta.girth == if matches!(id, CatalogId::F0p(_)) { 6 } else { girth(g) }
            && cg.meta.girth >= 5;
        push(format!("{id} invariants"), ok);
        if let Some(table) = two_blowup_table(id) {
            push(format!("{id} 2-blowup table"), table_is_proper(g, &table));
        }
    }
    SelfCheckReport { items }
}
