//! Backward push from the target.
//!
//! `reserve(s)` lower-bounds `pi(s, t)`, and at every point
//! `pi(t) = (1/n) sum_s reserve(s) + sum_u residue(u) pi(u)`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::Instant;

use super::{check_alpha, Estimate, EstimatorError};
use crate::graph::NodeId;
use crate::oracle::GraphAccess;

#[derive(Debug, Clone, PartialEq)]
pub struct BackwardPushState {
    pub reserve: HashMap<NodeId, f64>,
    pub residue: HashMap<NodeId, f64>,
    pub r_max: f64,
}

/// Threshold that bounds the additive error by `c * alpha / n <= c * pi(t)`.
pub fn default_r_max(n: usize, alpha: f64, c: f64) -> f64 {
    c * alpha / n.max(1) as f64
}

/// Pushes every residue above `r_max` (FIFO order) until none remains.
///
/// Each push on `u` costs one `deg(u)` plus, per neighbor `v`, one `neigh`
/// and one `deg(v)` query.
pub fn backward_push<O: GraphAccess>(
    oracle: &mut O,
    t: NodeId,
    alpha: f64,
    r_max: f64,
) -> Result<(Estimate, BackwardPushState), EstimatorError> {
    check_alpha(alpha)?;
    if r_max.is_nan() || r_max <= 0.0 {
        return Err(EstimatorError::Param(format!("r_max must be positive, got {r_max}")));
    }
    let start = Instant::now();
    let before = oracle.counters();
    if oracle.deg(t)? == 0 {
        return Err(EstimatorError::IsolatedTarget {
            target: Some(t),
            exact: alpha / oracle.num_nodes() as f64,
        });
    }

    let mut reserve: HashMap<NodeId, f64> = HashMap::new();
    let mut residue: HashMap<NodeId, f64> = HashMap::new();
    residue.insert(t, 1.0);
    let mut queue: VecDeque<NodeId> = VecDeque::from([t]);
    let mut queued: HashSet<NodeId> = HashSet::from([t]);

    while let Some(u) = queue.pop_front() {
        queued.remove(&u);
        let r = residue.insert(u, 0.0).unwrap_or(0.0);
        if r <= r_max {
            residue.insert(u, r);
            continue;
        }
        *reserve.entry(u).or_insert(0.0) += alpha * r;
        let d_u = oracle.deg(u)?;
        for i in 0..d_u {
            let v = oracle.neigh(u, i)?;
            let d_v = oracle.deg(v)?;
            let slot = residue.entry(v).or_insert(0.0);
            *slot += (1.0 - alpha) * r / d_v as f64;
            if *slot > r_max && queued.insert(v) {
                queue.push_back(v);
            }
        }
    }
    residue.retain(|_, r| *r > 0.0);

    let n = oracle.num_nodes() as f64;
    // Sum in node order so the result does not depend on hash iteration order.
    let mut settled: Vec<(NodeId, f64)> = reserve.iter().map(|(&k, &v)| (k, v)).collect();
    settled.sort_unstable_by_key(|&(k, _)| k);
    let value = settled.iter().map(|&(_, v)| v).sum::<f64>() / n;

    let estimate = Estimate {
        value,
        counters: oracle.counters() - before,
        walks: 0,
        moves: 0,
        elapsed: start.elapsed(),
        budget_exhausted: false,
    };
    Ok((estimate, BackwardPushState { reserve, residue, r_max }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::ground_truth::pagerank_power;
    use crate::oracle::GraphOracle;

    #[test]
    fn single_edge_regular() {
        let g = single_edge();
        let (est, _) = backward_push(&mut GraphOracle::new(&g, 0), 0, 0.2, 1e-8).unwrap();
        assert!((est.value - 0.5).abs() < 1e-7);
    }

    #[test]
    fn star_center_converges() {
        let g = star(3);
        let (est, state) = backward_push(&mut GraphOracle::new(&g, 0), 0, 0.2, 1e-10).unwrap();
        assert!((est.value - 17.0 / 36.0).abs() < 1e-8);
        assert!(state.residue.values().all(|&r| (0.0..=1e-10).contains(&r)));
        assert!(state.reserve.values().all(|&r| r >= 0.0));
    }

    #[test]
    fn residual_identity_on_star() {
        let g = star(3);
        let truth = pagerank_power(&g, 0.2, Some(400)).unwrap();
        for t in g.nodes() {
            for r_max in [1e-2, 1e-3, 1e-5] {
                let (est, st) =
                    backward_push(&mut GraphOracle::new(&g, 0), t, 0.2, r_max).unwrap();
                let pending: f64 = st.residue.iter().map(|(&u, &r)| r * truth.get(u)).sum();
                assert!((truth.get(t) - est.value - pending).abs() < 1e-12);
                assert!(est.value <= truth.get(t) + 1e-12);
            }
        }
    }

    #[test]
    fn deterministic_and_counted() {
        let g = cycle(30);
        let a = backward_push(&mut GraphOracle::new(&g, 0), 3, 0.2, 1e-4).unwrap();
        let b = backward_push(&mut GraphOracle::new(&g, 99), 3, 0.2, 1e-4).unwrap();
        assert_eq!(a.0.value, b.0.value);
        assert_eq!(a.0.counters, b.0.counters);
        assert_eq!(a.0.counters.jump_calls, 0);
        // Cycle: each push is deg(u), then neigh + deg for both neighbors.
        let pushes = a.0.counters.neigh_calls / 2;
        assert_eq!(a.0.counters.deg_calls, 1 + pushes * 3);
    }

    #[test]
    fn rejects_bad_inputs() {
        let (g, _) = crate::graph::UndirectedGraph::from_edges(3, [(0, 1)]).unwrap();
        let mut o = GraphOracle::new(&g, 0);
        assert!(backward_push(&mut o, 0, 0.2, 0.0).is_err());
        assert!(matches!(
            backward_push(&mut o, 2, 0.2, 1e-3),
            Err(EstimatorError::IsolatedTarget { .. })
        ));
    }

    #[test]
    fn default_threshold() {
        assert!((default_r_max(1000, 0.2, 0.1) - 2e-5).abs() < 1e-18);
    }
}
