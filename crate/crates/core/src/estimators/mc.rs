//! Global Monte-Carlo: walks from uniform sources, counting hits on the target.

use std::time::Instant;

use super::{sample_node, Estimate, EstimatorConfig, EstimatorError};
use crate::graph::NodeId;
use crate::oracle::GraphAccess;

/// Runs walks from `jump()` sources until `ceil(threshold)` of them end at
/// `t`, then returns the hit fraction. Stops early with
/// `budget_exhausted = true` once `cfg.mc_walk_cap` walks have been spent.
///
/// The target's degree is never queried, so isolated targets are accepted.
pub fn mc_global<O: GraphAccess>(
    oracle: &mut O,
    t: NodeId,
    cfg: &EstimatorConfig,
) -> Result<Estimate, EstimatorError> {
    cfg.validate()?;
    let n = oracle.num_nodes();
    if t as usize >= n {
        return Err(crate::oracle::OracleError::NodeOutOfRange { node: t, n }.into());
    }
    let start = Instant::now();
    let before = oracle.counters();
    let needed = cfg.stopping_threshold().ceil() as u64;
    let (mut hits, mut walks, mut moves) = (0u64, 0u64, 0u64);
    while hits < needed && walks < cfg.mc_walk_cap {
        let s = oracle.jump();
        let (v, m) = sample_node(oracle, s, cfg.alpha)?;
        walks += 1;
        moves += m;
        if v == t {
            hits += 1;
        }
    }
    Ok(Estimate {
        value: hits as f64 / walks as f64,
        counters: oracle.counters() - before,
        walks,
        moves,
        elapsed: start.elapsed(),
        budget_exhausted: hits < needed,
    })
}
