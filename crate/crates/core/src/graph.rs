//! Immutable undirected graph in compressed adjacency form.
//!
//! Every undirected edge `{u, v}` is stored twice, once in each endpoint's
//! slice, so `adjacency.len() == 2 * num_edges`. Slices are sorted ascending,
//! which fixes the meaning of "the i-th neighbor of u".

use std::fmt;

use thiserror::Error;

pub type NodeId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },
    #[error("line {line}: node id {id} out of range for n={n}")]
    NodeOutOfBounds { line: usize, id: u64, n: usize },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("malformed graph: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    num_edges: usize,
    offsets: Vec<usize>,
    adjacency: Vec<NodeId>,
}

impl fmt::Debug for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UndirectedGraph")
            .field("num_nodes", &self.num_nodes())
            .field("num_edges", &self.num_edges)
            .finish()
    }
}

impl UndirectedGraph {
    /// Builds a graph from a list of undirected edges.
    ///
    /// Duplicates (in either orientation) are collapsed; the number of
    /// dropped duplicates is returned alongside the graph. Self-loops and
    /// out-of-range ids are rejected.
    pub fn from_edges(
        num_nodes: usize,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<(Self, usize), GraphError> {
        if num_nodes > NodeId::MAX as usize {
            return Err(GraphError::Param(format!(
                "node count {num_nodes} exceeds the supported maximum"
            )));
        }
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::Invalid(format!("self-loop on node {u}")));
            }
            let bad = if (u as usize) >= num_nodes { u } else { v };
            if (u as usize) >= num_nodes || (v as usize) >= num_nodes {
                return Err(GraphError::Invalid(format!(
                    "node id {bad} out of range for n={num_nodes}"
                )));
            }
            pairs.push((u.min(v), u.max(v)));
        }
        let before = pairs.len();
        pairs.sort_unstable();
        pairs.dedup();
        let duplicates = before - pairs.len();
        Ok((Self::from_sorted_unique(num_nodes, &pairs), duplicates))
    }

    /// `pairs` must be sorted, deduplicated, and satisfy `u < v < num_nodes`.
    pub(crate) fn from_sorted_unique(num_nodes: usize, pairs: &[(NodeId, NodeId)]) -> Self {
        let mut degree = vec![0usize; num_nodes];
        for &(u, v) in pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(num_nodes + 1);
        offsets.push(0);
        let mut acc = 0;
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets[..num_nodes].to_vec();
        let mut adjacency = vec![0 as NodeId; acc];
        // Pairs are sorted by (u, v): pushing v into u's slice in this order
        // keeps it sorted. The reverse direction needs a per-slice sort.
        for &(u, v) in pairs {
            adjacency[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            adjacency[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for u in 0..num_nodes {
            adjacency[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Self {
            num_edges: pairs.len(),
            offsets,
            adjacency,
        }
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        let u = u as usize;
        self.offsets[u + 1] - self.offsets[u]
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.adjacency[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.num_nodes() as NodeId
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Full scan of every structural invariant.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.num_nodes();
        if self.offsets[0] != 0 {
            return Err(GraphError::Invalid("offsets[0] != 0".into()));
        }
        if self.offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(GraphError::Invalid("offsets decrease".into()));
        }
        if self.offsets[n] != 2 * self.num_edges || self.adjacency.len() != 2 * self.num_edges {
            return Err(GraphError::Invalid(format!(
                "degree sum {} != 2m = {}",
                self.offsets[n],
                2 * self.num_edges
            )));
        }
        for u in self.nodes() {
            let slice = self.neighbors(u);
            if slice.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GraphError::Invalid(format!(
                    "neighbors of {u} not strictly increasing"
                )));
            }
            for &v in slice {
                if v as usize >= n {
                    return Err(GraphError::Invalid(format!("neighbor {v} of {u} out of range")));
                }
                if v == u {
                    return Err(GraphError::Invalid(format!("self-loop on {u}")));
                }
                if self.neighbors(v).binary_search(&u).is_err() {
                    return Err(GraphError::Invalid(format!("edge {u}->{v} has no reverse")));
                }
            }
        }
        Ok(())
    }
}

/// Degree statistics used to size estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphStats {
    pub num_nodes: usize,
    pub num_edges: usize,
    /// Minimum over nodes with degree at least one; `None` for edgeless graphs.
    pub d_min_positive: Option<usize>,
    pub d_max: usize,
    pub avg_degree: f64,
    pub num_isolated: usize,
}

pub fn graph_stats(g: &UndirectedGraph) -> GraphStats {
    let mut d_min_positive: Option<usize> = None;
    let mut d_max = 0;
    let mut num_isolated = 0;
    for u in g.nodes() {
        let d = g.degree(u);
        if d == 0 {
            num_isolated += 1;
            continue;
        }
        d_max = d_max.max(d);
        d_min_positive = Some(d_min_positive.map_or(d, |m| m.min(d)));
    }
    let n = g.num_nodes();
    GraphStats {
        num_nodes: n,
        num_edges: g.num_edges(),
        d_min_positive,
        d_max,
        avg_degree: if n == 0 {
            0.0
        } else {
            2.0 * g.num_edges() as f64 / n as f64
        },
        num_isolated,
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn star_stats() {
        let s = graph_stats(&star(3));
        assert_eq!(s.d_min_positive, Some(1));
        assert_eq!(s.d_max, 3);
        assert_eq!(s.avg_degree, 1.5);
        assert_eq!(s.num_isolated, 0);
    }

    #[test]
    fn complete_graph_is_regular() {
        let g = complete(4);
        let s = graph_stats(&g);
        assert_eq!(g.num_edges(), 6);
        assert_eq!(s.d_min_positive, Some(3));
        assert_eq!(s.d_max, 3);
        g.validate().unwrap();
    }

    #[test]
    fn edgeless_graph_has_no_min_degree() {
        let (g, _) = UndirectedGraph::from_edges(5, []).unwrap();
        let s = graph_stats(&g);
        assert_eq!(s.d_min_positive, None);
        assert_eq!(s.num_isolated, 5);
    }

    #[test]
    fn from_edges_dedups_both_orientations() {
        let (g, dups) = UndirectedGraph::from_edges(3, [(0, 1), (1, 0), (2, 1), (0, 1)]).unwrap();
        assert_eq!(dups, 2);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        g.validate().unwrap();
    }

    #[test]
    fn from_edges_rejects_self_loops_and_bounds() {
        assert!(UndirectedGraph::from_edges(3, [(1, 1)]).is_err());
        assert!(UndirectedGraph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn edges_lists_each_once_sorted() {
        let g = complete(3);
        let e: Vec<_> = g.edges().collect();
        assert_eq!(e, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn validate_catches_asymmetry() {
        let mut g = star(2);
        g.adjacency[0] = 2;
        g.adjacency[1] = 2;
        assert!(g.validate().is_err());
    }
}
