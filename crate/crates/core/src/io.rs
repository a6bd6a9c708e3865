//! graph6 and edge-list readers and writers.
//!
//! graph6 follows the layout of nauty's `formats.txt`: a size header, then the
//! upper triangle of the adjacency matrix taken column by column
//! (`(0,1), (0,2), (1,2), (0,3), ..`) packed into 6-bit groups offset by 63.
//!
//! Edge lists are whitespace separated `u v` pairs, one per line. Lines
//! starting with `#` are comments. An optional `n <count>` line fixes the
//! vertex count (otherwise it is one more than the largest endpoint), which is
//! what lets isolated trailing vertices survive a round trip.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("malformed graph6 header")]
    Graph6Header,
    #[error("invalid graph6 byte {0:#04x}")]
    Graph6Byte(u8),
    #[error("graph6 body has {got} bytes, expected {expected}")]
    Graph6Length { got: usize, expected: usize },
    #[error("line {line}: {reason}")]
    EdgeList { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Graph6,
    EdgeList,
}

impl FromStr for Format {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "graph6" | "g6" => Ok(Format::Graph6),
            "edge-list" | "edgelist" | "edges" => Ok(Format::EdgeList),
            _ => Err(ParseError::UnknownFormat(s.to_string())),
        }
    }
}

const G6_HEADER: &str = ">>graph6<<";

fn is_g6_byte(b: u8) -> bool {
    (63..=126).contains(&b)
}

/// Guesses the format from the first meaningful line.
pub fn detect_format(input: &str) -> Format {
    let line = input
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if line.starts_with(G6_HEADER) || (!line.is_empty() && line.bytes().all(is_g6_byte)) {
        Format::Graph6
    } else {
        Format::EdgeList
    }
}

pub fn parse_graph(input: &str, format: Format) -> Result<Graph, ParseError> {
    match format {
        Format::Graph6 => {
            let line = input
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty())
                .ok_or(ParseError::Empty)?;
            parse_graph6(line)
        }
        Format::EdgeList => parse_edge_list(input),
    }
}

/// Parses every graph in the input: one per non-empty line for graph6, the
/// whole text for an edge list.
pub fn parse_many(input: &str, format: Format) -> Result<Vec<Graph>, ParseError> {
    match format {
        Format::Graph6 => input
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(parse_graph6)
            .collect(),
        Format::EdgeList => Ok(vec![parse_edge_list(input)?]),
    }
}

pub fn emit_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::Graph6 => to_graph6(g),
        Format::EdgeList => to_edge_list(g),
    }
}

pub fn parse_graph6(line: &str) -> Result<Graph, ParseError> {
    let line = line.trim();
    let line = line.strip_prefix(G6_HEADER).unwrap_or(line);
    let bytes = line.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !is_g6_byte(b)) {
        return Err(ParseError::Graph6Byte(b));
    }
    let data: Vec<u64> = bytes.iter().map(|&b| (b - 63) as u64).collect();
    let (n, body) = match data.as_slice() {
        [] => return Err(ParseError::Empty),
        [63, 63, rest @ ..] => {
            if rest.len() < 6 {
                return Err(ParseError::Graph6Header);
            }
            let n = rest[..6].iter().fold(0u64, |acc, &x| (acc << 6) | x);
            (n as usize, &rest[6..])
        }
        [63, rest @ ..] => {
            if rest.len() < 3 {
                return Err(ParseError::Graph6Header);
            }
            let n = rest[..3].iter().fold(0u64, |acc, &x| (acc << 6) | x);
            (n as usize, &rest[3..])
        }
        [n, rest @ ..] => (*n as usize, rest),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(ParseError::Graph6Length {
            got: body.len(),
            expected,
        });
    }
    let mut g = Graph::new(n);
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            if (body[k / 6] >> (5 - k % 6)) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for s in [12, 6, 0] {
            out.push(((n >> s) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for s in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> s) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            k += 1;
            if k.is_multiple_of(6) {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if !k.is_multiple_of(6) {
        out.push((acc << (6 - k % 6)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ascii")
}

pub fn parse_edge_list(input: &str) -> Result<Graph, ParseError> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = |reason: &str| ParseError::EdgeList {
            line: line_no,
            reason: reason.to_string(),
        };
        match toks.as_slice() {
            ["n", count] => {
                if declared.is_some() || !edges.is_empty() {
                    return Err(bad("vertex count must come first"));
                }
                declared = Some(count.parse().map_err(|_| bad("bad vertex count"))?);
            }
            [a, b] => {
                let u: usize = a.parse().map_err(|_| bad("bad endpoint"))?;
                let v: usize = b.parse().map_err(|_| bad("bad endpoint"))?;
                if u == v {
                    return Err(ParseError::Graph {
                        line: line_no,
                        source: GraphError::SelfLoop(u),
                    });
                }
                edges.push((line_no, u, v));
            }
            _ => return Err(bad("expected two endpoints")),
        }
    }
    let n = match declared {
        Some(n) => n,
        None => edges.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0),
    };
    let mut g = Graph::new(n);
    for (line, u, v) in edges {
        g.try_add_edge(u, v)
            .map_err(|source| ParseError::Graph { line, source })?;
    }
    Ok(g)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Straight transcription of the published packing, kept separate from
    /// `to_graph6` so the two can be compared.
    fn reference_graph6(n: usize, adj: &dyn Fn(usize, usize) -> bool) -> String {
        assert!(n <= 62);
        let mut bits = Vec::new();
        for j in 1..n {
            for i in 0..j {
                bits.push(adj(i, j));
            }
        }
        while bits.len() % 6 != 0 {
            bits.push(false);
        }
        let mut s = String::new();
        s.push((n as u8 + 63) as char);
        for chunk in bits.chunks(6) {
            let v = chunk.iter().fold(0u8, |a, &b| a * 2 + b as u8);
            s.push((v + 63) as char);
        }
        s
    }

    #[test]
    fn k5_graph6() {
        let expected = reference_graph6(5, &|_, _| true);
        assert_eq!(expected, "D~{");
        let g = parse_graph6("D~{").unwrap();
        assert_eq!(g, Graph::complete(5));
        assert_eq!(to_graph6(&g), "D~{");
    }

    #[test]
    fn petersen_graph6_matches_reference() {
        let mut p = Graph::new(10);
        for i in 0..5 {
            p.add_edge(i, (i + 1) % 5);
            p.add_edge(5 + i, i);
            p.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        assert_eq!(to_graph6(&p), reference_graph6(10, &|i, j| p.has_edge(i, j)));
    }

    #[test]
    fn edge_list_cycle() {
        let g = parse_edge_list("0 1\n1 2\n2 3\n3 4\n4 0").unwrap();
        assert_eq!(g, Graph::cycle(5));
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            parse_edge_list("0 0"),
            Err(ParseError::Graph {
                source: GraphError::SelfLoop(0),
                ..
            })
        ));
        assert!(matches!(
            parse_edge_list("n 3\n0 5"),
            Err(ParseError::Graph {
                source: GraphError::OutOfRange { endpoint: 5, n: 3 },
                ..
            })
        ));
        assert!(parse_edge_list("0 1 2").is_err());
        // duplicates collapse
        assert_eq!(parse_edge_list("0 1\n1 0\n0 1").unwrap().edge_count(), 1);
    }

    #[test]
    fn graph6_errors() {
        assert_eq!(parse_graph6(""), Err(ParseError::Empty));
        assert!(matches!(parse_graph6("D~"), Err(ParseError::Graph6Length { .. })));
        assert!(matches!(parse_graph6("D~ {"), Err(ParseError::Graph6Byte(b' '))));
        assert_eq!(parse_graph6("~?"), Err(ParseError::Graph6Header));
    }

    #[test]
    fn long_header() {
        let g = Graph::cycle(100);
        let s = to_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
        assert_eq!(parse_graph6(&format!(">>graph6<<{s}")).unwrap(), g);
    }

    #[test]
    fn detects_formats() {
        assert_eq!(detect_format("D~{\n"), Format::Graph6);
        assert_eq!(detect_format("# c\n0 1\n"), Format::EdgeList);
        assert_eq!(detect_format("n 3\n"), Format::EdgeList);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (0usize..80).prop_flat_map(|n| {
            proptest::collection::vec((0..n.max(1), 0..n.max(1)), 0..(2 * n + 1)).prop_map(
                move |pairs| {
                    let mut g = Graph::new(n);
                    for (u, v) in pairs {
                        if u != v && u < n && v < n {
                            g.add_edge(u, v);
                        }
                    }
                    g
                },
            )
        })
    }

    proptest! {
        #[test]
        fn round_trips(g in arb_graph()) {
            prop_assert_eq!(&parse_graph6(&to_graph6(&g)).unwrap(), &g);
            prop_assert_eq!(&parse_edge_list(&to_edge_list(&g)).unwrap(), &g);
            prop_assert_eq!(&g.induced(&g.vertices()).0, &g);
        }

        #[test]
        fn components_partition(g in arb_graph()) {
            let comps = g.components();
            let total: usize = comps.iter().map(|c| c.len()).sum();
            prop_assert_eq!(total, g.n());
            for c in &comps {
                prop_assert!(g.induced(c).0.is_connected());
            }
            for w in comps.windows(2) {
                prop_assert!(w[0].first() < w[1].first());
                prop_assert!(w[0].is_disjoint(&w[1]));
            }
        }
    }
}
