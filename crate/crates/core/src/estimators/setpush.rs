//! Randomized level-wise push from the target.
//!
//! Level residues `r^(l)` are unbiased for `pi^(l)_t / alpha`; a node whose
//! per-neighbor share `(1-alpha) r / d_u` falls below `theta` sends `theta`
//! to a Binomial-sized uniform subset of neighbors instead of to all of them.
//! The estimate `(1/n) sum_l sum_s (d_t / d_s) alpha r^(l)(s)` is unbiased for
//! the PageRank of `t` truncated at `L` levels.

use std::collections::HashMap;
use std::time::Instant;

use rand::seq::index;
use rand_distr::{Binomial, Distribution};

use super::{ceil_noise_tolerant, median_of_runs, Estimate, EstimatorConfig, EstimatorError};
use crate::graph::{GraphStats, NodeId};
use crate::oracle::GraphAccess;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetPushPlan {
    /// Number of push rounds `L`; residues exist for levels `0..=L`.
    pub levels: usize,
    pub theta: f64,
}

/// `L = ceil(log_{1-alpha}(c alpha / 2n))` and
/// `theta = max(alpha c^2 / (12 L d_t), (alpha c^2 / 12 L) sqrt(2 (1-alpha) / m))`.
pub fn plan_setpush(
    n: usize,
    m: usize,
    d_t: usize,
    cfg: &EstimatorConfig,
) -> Result<SetPushPlan, EstimatorError> {
    cfg.validate()?;
    if d_t == 0 {
        return Err(EstimatorError::IsolatedTarget {
            target: None,
            exact: cfg.alpha / n.max(1) as f64,
        });
    }
    if m == 0 || n == 0 {
        return Err(EstimatorError::Param("graph has no edges".into()));
    }
    let (alpha, c) = (cfg.alpha, cfg.c);
    let levels = ceil_noise_tolerant((c * alpha / (2.0 * n as f64)).ln() / (1.0 - alpha).ln())
        .max(1.0) as usize;
    let base = alpha * c * c / (12.0 * levels as f64);
    let theta = (base / d_t as f64).max(base * (2.0 * (1.0 - alpha) / m as f64).sqrt());
    Ok(SetPushPlan { levels, theta })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetPushState {
    /// `level_residues[l]` lists the non-zero entries of `r^(l)` by node id.
    pub level_residues: Vec<Vec<(NodeId, f64)>>,
    pub theta: f64,
    pub levels: usize,
    pub accumulator: f64,
}

/// One unamplified run. `d_t` must already be known to be positive.
///
/// Every node with non-zero residue at a level costs one `deg` query; a
/// deterministic push adds `d_u` `neigh` queries, a randomized one `k`.
pub fn setpush_single_run<O: GraphAccess>(
    oracle: &mut O,
    t: NodeId,
    d_t: usize,
    alpha: f64,
    plan: SetPushPlan,
) -> Result<SetPushState, EstimatorError> {
    let n = oracle.num_nodes() as f64;
    let SetPushPlan { levels, theta } = plan;
    let mut current: Vec<(NodeId, f64)> = vec![(t, 1.0)];
    let mut level_residues = Vec::with_capacity(levels + 1);
    let mut accumulator = 0.0;

    for level in 0..=levels {
        let mut next: HashMap<NodeId, f64> = HashMap::new();
        for &(u, r) in &current {
            let d_u = oracle.deg(u)?;
            accumulator += d_t as f64 / d_u as f64 * alpha * r;
            if level == levels {
                continue;
            }
            let share = (1.0 - alpha) * r / d_u as f64;
            if share >= theta {
                for i in 0..d_u {
                    let v = oracle.neigh(u, i)?;
                    *next.entry(v).or_insert(0.0) += share;
                }
            } else {
                let rho = share / theta;
                let k = Binomial::new(d_u as u64, rho)
                    .map_err(|e| EstimatorError::Param(e.to_string()))?
                    .sample(oracle.rng()) as usize;
                if k == 0 {
                    continue;
                }
                let picks = index::sample(oracle.rng(), d_u, k);
                for i in picks.iter() {
                    let v = oracle.neigh(u, i)?;
                    *next.entry(v).or_insert(0.0) += theta;
                }
            }
        }
        let mut sorted: Vec<(NodeId, f64)> = next.into_iter().collect();
        sorted.sort_unstable_by_key(|&(v, _)| v);
        level_residues.push(std::mem::replace(&mut current, sorted));
    }

    Ok(SetPushState {
        level_residues,
        theta,
        levels,
        accumulator: accumulator / n,
    })
}

/// Median of `n_m` independent runs, each sized by [`plan_setpush`].
pub fn setpush<O: GraphAccess>(
    oracle: &mut O,
    t: NodeId,
    cfg: &EstimatorConfig,
    stats: &GraphStats,
) -> Result<Estimate, EstimatorError> {
    cfg.validate()?;
    let start = Instant::now();
    let before = oracle.counters();
    let d_t = oracle.deg(t)?;
    if d_t == 0 {
        return Err(EstimatorError::IsolatedTarget {
            target: Some(t),
            exact: cfg.alpha / oracle.num_nodes() as f64,
        });
    }
    let plan = plan_setpush(oracle.num_nodes(), stats.num_edges, d_t, cfg)?;
    let values = (0..cfg.median_runs())
        .map(|_| setpush_single_run(oracle, t, d_t, cfg.alpha, plan).map(|s| s.accumulator))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Estimate {
        value: median_of_runs(&values)?,
        counters: oracle.counters() - before,
        walks: 0,
        moves: 0,
        elapsed: start.elapsed(),
        budget_exhausted: false,
    })
}
