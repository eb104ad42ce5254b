//! graph6 reading and writing, plus text exporters for weighted graphs.
//!
//! graph6 packs the upper triangle of the adjacency matrix column by column
//! (`(0,1), (0,2), (1,2), (0,3), ...`) into 6-bit groups, each written as a
//! byte `63 + value`. The vertex count comes first: one byte for `n <= 62`,
//! `126` plus three bytes up to `258047`, and `126 126` plus six bytes
//! beyond that. Only simple undirected graphs are handled here.

use std::fmt::Write as _;
use std::io::BufRead;

use thiserror::Error;

use crate::graph::{Graph, NotAGraph, WeightedGraph};
use crate::ratmath::RatMatrix;

const HEADER: &str = ">>graph6<<";
const MAX_ORDER: u64 = 68_719_476_735;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("byte {byte} at offset {offset} is outside the graph6 range 63..=126")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("truncated graph6 data: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{extra} trailing bytes after graph6 data")]
    TrailingBytes { extra: usize },
    #[error("nonzero padding bits in the last graph6 byte")]
    NonzeroPadding,
    #[error("empty graph6 line")]
    Empty,
}

/// A graph6 line together with the graph it encodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph6Record {
    pub line_no: usize,
    pub raw: String,
    pub graph: Graph,
}

/// A [`Graph6Error`] tagged with its 1-based line number.
#[derive(Debug, Error)]
pub enum StreamError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: Graph6Error },
    #[error("read error: {0}")]
    Io(#[from] std::io::Error),
}

fn decode_order(bytes: &[u8]) -> Result<(u64, usize), Graph6Error> {
    let need = |len: usize| {
        if bytes.len() < len {
            Err(Graph6Error::Truncated {
                expected: len,
                found: bytes.len(),
            })
        } else {
            Ok(())
        }
    };
    let fold = |range: std::ops::Range<usize>| {
        bytes[range]
            .iter()
            .fold(0u64, |acc, &b| (acc << 6) | u64::from(b - 63))
    };
    need(1)?;
    if bytes[0] != 126 {
        return Ok((u64::from(bytes[0] - 63), 1));
    }
    need(2)?;
    if bytes[1] != 126 {
        need(4)?;
        return Ok((fold(1..4), 4));
    }
    need(8)?;
    Ok((fold(2..8), 8))
}

fn encode_order(n: u64, out: &mut Vec<u8>) {
    let push_groups = |out: &mut Vec<u8>, groups: usize| {
        for k in (0..groups).rev() {
            out.push(((n >> (6 * k)) & 0x3f) as u8 + 63);
        }
    };
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        push_groups(out, 3);
    } else {
        assert!(n <= MAX_ORDER, "graph too large for graph6");
        out.push(126);
        out.push(126);
        push_groups(out, 6);
    }
}

/// Decodes one graph6 string (no trailing newline). A leading `>>graph6<<`
/// header is tolerated.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let body = line.strip_prefix(HEADER).unwrap_or(line);
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    let offset = line.len() - body.len();
    if let Some(pos) = bytes.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(Graph6Error::InvalidByte {
            offset: offset + pos,
            byte: bytes[pos],
        });
    }
    let (n, start) = decode_order(bytes)?;
    let bits = u128::from(n) * u128::from(n.saturating_sub(1)) / 2;
    let expected = bits.div_ceil(6);
    let found = (bytes.len() - start) as u128;
    if found < expected {
        return Err(Graph6Error::Truncated {
            expected: (start as u128 + expected) as usize,
            found: bytes.len(),
        });
    }
    if found > expected {
        return Err(Graph6Error::TrailingBytes {
            extra: (found - expected) as usize,
        });
    }
    let n = n as usize;
    let data = &bytes[start..];
    let pad = (expected * 6 - bits) as u32;
    if pad > 0 && (data[data.len() - 1] - 63) & ((1u8 << pad) - 1) != 0 {
        return Err(Graph6Error::NonzeroPadding);
    }
    let mut g = Graph::empty(n);
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Encodes a graph as graph6 without header or newline.
pub fn write_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    encode_order(n as u64, &mut out);
    let bits = n * n.saturating_sub(1) / 2;
    let mut groups = vec![0u8; bits.div_ceil(6)];
    for (u, v) in g.edges() {
        // Column-major index of (u, v), u < v.
        let k = v * (v - 1) / 2 + u;
        groups[k / 6] |= 1 << (5 - k % 6);
    }
    out.extend(groups.into_iter().map(|b| b + 63));
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Streams graph6 records from a reader, skipping blank lines. Errors carry
/// the 1-based line number.
pub fn read_graph6<R: BufRead>(reader: R) -> impl Iterator<Item = Result<Graph6Record, StreamError>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(idx, line)| {
            let line_no = idx + 1;
            match line {
                Err(e) => Some(Err(StreamError::Io(e))),
                Ok(raw) => {
                    let raw = raw.trim_end_matches('\r').to_string();
                    if raw.is_empty() {
                        return None;
                    }
                    Some(
                        parse_graph6(&raw)
                            .map(|graph| Graph6Record {
                                line_no,
                                raw,
                                graph,
                            })
                            .map_err(|source| StreamError::Parse {
                                line: line_no,
                                source,
                            }),
                    )
                }
            }
        })
}

pub fn adjacency(g: &Graph) -> RatMatrix {
    g.adjacency()
}

pub fn graph_of(a: &RatMatrix) -> Result<Graph, NotAGraph> {
    Graph::from_adjacency(a)
}

/// Edge list: a `n edges` header line, then `u v w` per entry sorted by
/// `(u, v)`, loops as `u u w`.
pub fn export_edgelist(g: &WeightedGraph) -> String {
    let mut out = format!("{} {}\n", g.order(), g.edge_count());
    for ((u, v), w) in g.weights() {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    out
}

/// Graphviz DOT with weights as edge labels.
pub fn export_dot(g: &WeightedGraph) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.order() {
        let _ = writeln!(out, "  {v};");
    }
    for ((u, v), w) in g.weights() {
        let _ = writeln!(out, "  {u} -- {v} [label=\"{w}\"];");
    }
    out.push_str("}\n");
    out
}
