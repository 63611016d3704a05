//! Local PageRank estimation for a single target node of an undirected graph.
//!
//! The main estimator, [`estimators::backmc`], runs alpha-discounted random
//! walks from the target and averages `d_t / (n d_v)` over their terminals.
//! Baselines (global Monte-Carlo, backward push, randomized set push), a
//! power-iteration ground truth, graph generators, and an experiment harness
//! live alongside it.

pub mod estimators;
pub mod generators;
pub mod graph;
pub mod ground_truth;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod rng;

pub use graph::{graph_stats, GraphStats, NodeId, UndirectedGraph};
pub use oracle::{GraphAccess, GraphOracle, QueryCounters};
