//! Arc-centric graph access: `deg(u)`, `neigh(u, i)` and `jump()`.
//!
//! Estimators see the graph only through [`GraphAccess`]; every call is
//! counted, and all randomness an estimator consumes comes from the
//! oracle's own seeded stream.

use std::ops::{Add, Sub};

use rand::Rng;
use thiserror::Error;

use crate::graph::{NodeId, UndirectedGraph};
use crate::rng::{seeded_rng, WalkRng};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("node {node} out of range for n={n}")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("neighbor index {index} out of range for node {node} with degree {degree}")]
    NeighborIndex { node: NodeId, index: usize, degree: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct QueryCounters {
    pub deg_calls: u64,
    pub neigh_calls: u64,
    pub jump_calls: u64,
}

impl QueryCounters {
    pub fn total(&self) -> u64 {
        self.deg_calls + self.neigh_calls + self.jump_calls
    }
}

impl Add for QueryCounters {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            deg_calls: self.deg_calls + o.deg_calls,
            neigh_calls: self.neigh_calls + o.neigh_calls,
            jump_calls: self.jump_calls + o.jump_calls,
        }
    }
}

impl Sub for QueryCounters {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            deg_calls: self.deg_calls - o.deg_calls,
            neigh_calls: self.neigh_calls - o.neigh_calls,
            jump_calls: self.jump_calls - o.jump_calls,
        }
    }
}

/// The only interface estimators may use to observe a graph.
///
/// `num_nodes` is global knowledge in the access model and is not counted.
pub trait GraphAccess {
    fn num_nodes(&self) -> usize;
    fn deg(&mut self, u: NodeId) -> Result<usize, OracleError>;
    /// `i` is 0-based; returns the i-th smallest neighbor of `u`.
    fn neigh(&mut self, u: NodeId, i: usize) -> Result<NodeId, OracleError>;
    /// Uniform node over all `n` nodes, isolated ones included.
    fn jump(&mut self) -> NodeId;
    fn rng(&mut self) -> &mut WalkRng;
    fn counters(&self) -> QueryCounters;
}

pub struct GraphOracle<'g> {
    graph: &'g UndirectedGraph,
    rng: WalkRng,
    counters: QueryCounters,
}

impl<'g> GraphOracle<'g> {
    pub fn new(graph: &'g UndirectedGraph, seed: u64) -> Self {
        Self {
            graph,
            rng: seeded_rng(seed),
            counters: QueryCounters::default(),
        }
    }

    pub fn counters_snapshot(&self) -> QueryCounters {
        self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = QueryCounters::default();
    }

    #[inline]
    fn check(&self, u: NodeId) -> Result<(), OracleError> {
        let n = self.graph.num_nodes();
        if (u as usize) < n {
            Ok(())
        } else {
            Err(OracleError::NodeOutOfRange { node: u, n })
        }
    }
}

impl GraphAccess for GraphOracle<'_> {
    #[inline]
    fn num_nodes(&self) -> usize {
        self.graph.num_nodes()
    }

    #[inline]
    fn deg(&mut self, u: NodeId) -> Result<usize, OracleError> {
        self.check(u)?;
        self.counters.deg_calls += 1;
        Ok(self.graph.degree(u))
    }

    #[inline]
    fn neigh(&mut self, u: NodeId, i: usize) -> Result<NodeId, OracleError> {
        self.check(u)?;
        let slice = self.graph.neighbors(u);
        let v = *slice.get(i).ok_or(OracleError::NeighborIndex {
            node: u,
            index: i,
            degree: slice.len(),
        })?;
        self.counters.neigh_calls += 1;
        Ok(v)
    }

    #[inline]
    fn jump(&mut self) -> NodeId {
        let n = self.graph.num_nodes();
        assert!(n > 0, "jump() on an empty graph");
        self.counters.jump_calls += 1;
        self.rng.random_range(0..n) as NodeId
    }

    #[inline]
    fn rng(&mut self) -> &mut WalkRng {
        &mut self.rng
    }

    #[inline]
    fn counters(&self) -> QueryCounters {
        self.counters
    }
}

/// Oracle wrapper that logs every call; used to audit estimator access patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessEvent {
    Deg(NodeId),
    Neigh(NodeId, usize),
    Jump(NodeId),
}

pub struct RecordingOracle<'g> {
    inner: GraphOracle<'g>,
    pub log: Vec<AccessEvent>,
}

impl<'g> RecordingOracle<'g> {
    pub fn new(graph: &'g UndirectedGraph, seed: u64) -> Self {
        Self {
            inner: GraphOracle::new(graph, seed),
            log: Vec::new(),
        }
    }
}

impl GraphAccess for RecordingOracle<'_> {
    fn num_nodes(&self) -> usize {
        self.inner.num_nodes()
    }
    fn deg(&mut self, u: NodeId) -> Result<usize, OracleError> {
        let d = self.inner.deg(u)?;
        self.log.push(AccessEvent::Deg(u));
        Ok(d)
    }
    fn neigh(&mut self, u: NodeId, i: usize) -> Result<NodeId, OracleError> {
        let v = self.inner.neigh(u, i)?;
        self.log.push(AccessEvent::Neigh(u, i));
        Ok(v)
    }
    fn jump(&mut self) -> NodeId {
        let v = self.inner.jump();
        self.log.push(AccessEvent::Jump(v));
        v
    }
    fn rng(&mut self) -> &mut WalkRng {
        self.inner.rng()
    }
    fn counters(&self) -> QueryCounters {
        self.inner.counters()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn deg_counts_and_bounds() {
        let g = single_edge();
        let mut o = GraphOracle::new(&g, 1);
        assert_eq!(o.deg(0), Ok(1));
        assert_eq!(o.counters_snapshot().deg_calls, 1);
        assert!(matches!(o.deg(2), Err(OracleError::NodeOutOfRange { node: 2, n: 2 })));
        assert_eq!(o.counters_snapshot().deg_calls, 1);

        let k4 = complete(4);
        assert_eq!(GraphOracle::new(&k4, 0).deg(2), Ok(3));
    }

    #[test]
    fn neigh_sorted_and_index_error() {
        let g = single_edge();
        assert_eq!(GraphOracle::new(&g, 0).neigh(0, 0), Ok(1));

        let s = star(3);
        let mut o = GraphOracle::new(&s, 0);
        assert_eq!(o.neigh(0, 1), Ok(2));
        assert!(matches!(o.neigh(0, 3), Err(OracleError::NeighborIndex { .. })));
        assert_eq!(o.counters_snapshot().neigh_calls, 1);
    }

    #[test]
    fn jump_single_node() {
        let (g, _) = UndirectedGraph::from_edges(1, []).unwrap();
        let mut o = GraphOracle::new(&g, 5);
        assert!((0..100).all(|_| o.jump() == 0));
        assert_eq!(o.counters_snapshot().jump_calls, 100);
    }

    #[test]
    fn jump_reproducible() {
        let g = cycle(50);
        let mut a = GraphOracle::new(&g, 77);
        let mut b = GraphOracle::new(&g, 77);
        let xs: Vec<_> = (0..64).map(|_| a.jump()).collect();
        let ys: Vec<_> = (0..64).map(|_| b.jump()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn counters_snapshot_and_reset() {
        let g = complete(4);
        let mut o = GraphOracle::new(&g, 0);
        assert_eq!(o.counters_snapshot(), QueryCounters::default());
        o.deg(0).unwrap();
        o.deg(1).unwrap();
        o.neigh(1, 0).unwrap();
        let snap = o.counters_snapshot();
        assert_eq!((snap.deg_calls, snap.neigh_calls, snap.jump_calls), (2, 1, 0));
        assert_eq!(o.counters_snapshot(), snap);
        assert_eq!(snap.total(), 3);
        o.reset_counters();
        assert_eq!(o.counters_snapshot(), QueryCounters::default());
    }

    #[test]
    fn recording_oracle_logs_calls() {
        let g = star(3);
        let mut o = RecordingOracle::new(&g, 3);
        o.deg(0).unwrap();
        o.neigh(0, 2).unwrap();
        let j = o.jump();
        assert_eq!(
            o.log,
            vec![AccessEvent::Deg(0), AccessEvent::Neigh(0, 2), AccessEvent::Jump(j)]
        );
        assert_eq!(o.counters().total(), 3);
    }
}
