//! Plain-text edge lists.
//!
//! One undirected edge per line as two whitespace-separated 0-based ids.
//! Lines starting with `#` are comments, except that a `# n=<N>` header
//! fixes the node count (it may only raise it above `1 + max id`).

use std::io::{BufRead, Write};

use crate::graph::{GraphError, NodeId, UndirectedGraph};

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: UndirectedGraph,
    /// Number of input edges dropped as duplicates of an earlier line.
    pub duplicates: usize,
}

fn parse_header_n(line: &str) -> Option<Result<u64, String>> {
    let body = line.trim_start_matches('#');
    body.split_whitespace()
        .find_map(|tok| tok.strip_prefix("n="))
        .map(|v| v.parse::<u64>().map_err(|e| format!("bad n= header '{v}': {e}")))
}

pub fn load_edge_list<R: BufRead>(source: R) -> Result<LoadedGraph, GraphError> {
    let mut declared_n: Option<u64> = None;
    let mut max_id: Option<u64> = None;
    let mut edges: Vec<(u64, u64, usize)> = Vec::new();

    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| GraphError::Io(e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            if let Some(n) = parse_header_n(trimmed) {
                let n = n.map_err(|msg| GraphError::Parse { line: lineno, msg })?;
                declared_n = Some(n);
            }
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let mut next_id = || -> Result<u64, GraphError> {
            let tok = toks.next().ok_or_else(|| GraphError::Parse {
                line: lineno,
                msg: "expected two node ids".into(),
            })?;
            tok.parse::<u64>().map_err(|_| GraphError::Parse {
                line: lineno,
                msg: format!("not a node id: '{tok}'"),
            })
        };
        let u = next_id()?;
        let v = next_id()?;
        if let Some(extra) = toks.next() {
            return Err(GraphError::Parse {
                line: lineno,
                msg: format!("unexpected trailing token '{extra}'"),
            });
        }
        if u == v {
            return Err(GraphError::SelfLoop { line: lineno });
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v, lineno));
    }

    let seen_n = max_id.map_or(0, |m| m + 1);
    let n = match declared_n {
        Some(d) => {
            if let Some(&(u, v, line)) = edges.iter().find(|&&(u, v, _)| u >= d || v >= d) {
                return Err(GraphError::NodeOutOfBounds {
                    line,
                    id: u.max(v),
                    n: d as usize,
                });
            }
            d
        }
        None => seen_n,
    };
    if n > NodeId::MAX as u64 {
        return Err(GraphError::Param(format!("node count {n} too large")));
    }
    let (graph, duplicates) = UndirectedGraph::from_edges(
        n as usize,
        edges.into_iter().map(|(u, v, _)| (u as NodeId, v as NodeId)),
    )?;
    Ok(LoadedGraph { graph, duplicates })
}

pub fn write_edge_list<W: Write>(g: &UndirectedGraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# n={} m={}", g.num_nodes(), g.num_edges())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn edge_list_string(g: &UndirectedGraph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("edge list is ASCII")
}
