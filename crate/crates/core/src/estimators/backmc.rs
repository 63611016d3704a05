//! Backward Monte-Carlo: walks start at the target itself.
//!
//! By the symmetry `d_u pi(u, t) = d_t pi(t, u)` of undirected graphs, the
//! terminal `v` of a discounted walk from `t` yields the unbiased draw
//! `q = d_t / (n d_v)` of `pi(t)`. The variance of `q` is at most
//! `d_t pi(t) / (n d_min)`, which sizes the walk count below.

use std::time::Instant;

use super::{
    ceil_noise_tolerant, median_of_runs, sample_node, Estimate, EstimatorConfig, EstimatorError,
    Mode,
};
use crate::graph::{GraphStats, NodeId};
use crate::oracle::GraphAccess;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackMCPlan {
    /// Walks per run.
    pub n_r: u64,
    /// Median repetitions; always odd.
    pub n_m: usize,
}

/// Sizes a fixed-mode run so that one run fails with probability at most 1/3
/// and the median of `n_m` runs fails with probability at most `p_f`.
pub fn plan_backmc(
    stats: &GraphStats,
    d_t: usize,
    cfg: &EstimatorConfig,
) -> Result<BackMCPlan, EstimatorError> {
    cfg.validate()?;
    if d_t == 0 {
        return Err(EstimatorError::IsolatedTarget {
            target: None,
            exact: cfg.alpha / stats.num_nodes.max(1) as f64,
        });
    }
    let d_min = stats
        .d_min_positive
        .ok_or_else(|| EstimatorError::Param("graph has no edges".into()))?
        as f64;
    let alpha = cfg.alpha;
    let sqrt_term = (stats.num_edges as f64).sqrt() / (2.0 * (1.0 - alpha)).sqrt();
    let scale = (d_t as f64).min(sqrt_term);
    let n_r = ceil_noise_tolerant(3.0 / (cfg.c * cfg.c * alpha * d_min) * scale).max(1.0);
    Ok(BackMCPlan {
        n_r: n_r as u64,
        n_m: cfg.median_runs(),
    })
}

/// One draw of `q(t) = d_t / (n d_v)` for a fresh walk from `t`.
///
/// Costs the walk's queries plus one `deg` query on the terminal.
pub fn sample_q<O: GraphAccess>(
    oracle: &mut O,
    t: NodeId,
    d_t: usize,
    alpha: f64,
) -> Result<(f64, u64), EstimatorError> {
    let (ratio, moves) = sample_ratio(oracle, t, d_t, alpha)?;
    Ok((ratio / oracle.num_nodes() as f64, moves))
}

/// `d_t / d_v` for the terminal `v` of a fresh walk; `q = ratio / n`.
fn sample_ratio<O: GraphAccess>(
    oracle: &mut O,
    t: NodeId,
    d_t: usize,
    alpha: f64,
) -> Result<(f64, u64), EstimatorError> {
    let (v, moves) = sample_node(oracle, t, alpha)?;
    let d_v = oracle.deg(v)?;
    debug_assert!(d_v > 0, "a walk from a non-isolated node cannot end on an isolated one");
    Ok((d_t as f64 / d_v as f64, moves))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialEstimate {
    pub value: f64,
    pub walks: u64,
    pub moves: u64,
}

fn run_walks<O: GraphAccess>(
    oracle: &mut O,
    t: NodeId,
    d_t: usize,
    alpha: f64,
    n_r: u64,
) -> Result<PartialEstimate, EstimatorError> {
    // Summing d_t / d_v keeps regular graphs exact: every term is 1.
    let mut sum = 0.0;
    let mut moves = 0;
    for _ in 0..n_r {
        let (ratio, m) = sample_ratio(oracle, t, d_t, alpha)?;
        sum += ratio;
        moves += m;
    }
    Ok(PartialEstimate {
        value: sum / (n_r as f64 * oracle.num_nodes() as f64),
        walks: n_r,
        moves,
    })
}

fn fetch_target_degree<O: GraphAccess>(
    oracle: &mut O,
    t: NodeId,
    alpha: f64,
) -> Result<usize, EstimatorError> {
    let d_t = oracle.deg(t)?;
    if d_t == 0 {
        return Err(EstimatorError::IsolatedTarget {
            target: Some(t),
            exact: alpha / oracle.num_nodes() as f64,
        });
    }
    Ok(d_t)
}

/// Mean of `n_r` draws of `q(t)`; fetches `d_t` with one `deg` query.
pub fn backmc_single_run<O: GraphAccess>(
    oracle: &mut O,
    t: NodeId,
    alpha: f64,
    n_r: u64,
) -> Result<PartialEstimate, EstimatorError> {
    super::check_alpha(alpha)?;
    if n_r == 0 {
        return Err(EstimatorError::Param("n_r must be positive".into()));
    }
    let d_t = fetch_target_degree(oracle, t, alpha)?;
    run_walks(oracle, t, d_t, alpha, n_r)
}

/// Estimates `pi(t)` to relative error `c` with probability `1 - p_f`.
///
/// Fixed mode needs `stats` (for `m` and the minimum positive degree) and
/// returns the median of `n_m` runs. Adaptive mode ignores `stats`: it
/// doubles the walk count until the normalized sum `sum_i d_min_seen / d_v_i`
/// reaches the stopping threshold.
pub fn backmc<O: GraphAccess>(
    oracle: &mut O,
    t: NodeId,
    cfg: &EstimatorConfig,
    stats: Option<&GraphStats>,
) -> Result<Estimate, EstimatorError> {
    cfg.validate()?;
    let start = Instant::now();
    let before = oracle.counters();
    let d_t = fetch_target_degree(oracle, t, cfg.alpha)?;

    let (value, walks, moves) = match cfg.mode {
        Mode::Fixed => {
            let stats = stats.ok_or_else(|| {
                EstimatorError::Param("fixed mode needs graph statistics".into())
            })?;
            let plan = plan_backmc(stats, d_t, cfg)?;
            let mut values = Vec::with_capacity(plan.n_m);
            let (mut walks, mut moves) = (0, 0);
            for _ in 0..plan.n_m {
                let run = run_walks(oracle, t, d_t, cfg.alpha, plan.n_r)?;
                values.push(run.value);
                walks += run.walks;
                moves += run.moves;
            }
            (median_of_runs(&values)?, walks, moves)
        }
        Mode::Adaptive => adaptive(oracle, t, d_t, cfg)?,
    };

    Ok(Estimate {
        value,
        counters: oracle.counters() - before,
        walks,
        moves,
        elapsed: start.elapsed(),
        budget_exhausted: false,
    })
}

fn adaptive<O: GraphAccess>(
    oracle: &mut O,
    t: NodeId,
    d_t: usize,
    cfg: &EstimatorConfig,
) -> Result<(f64, u64, u64), EstimatorError> {
    let threshold = cfg.stopping_threshold();
    let n = oracle.num_nodes() as f64;
    let mut batch: u64 = 2;
    let (mut walks, mut moves) = (0u64, 0u64);
    let mut sum_ratio = 0.0;
    let mut d_seen = usize::MAX;
    loop {
        for _ in 0..batch {
            let (v, m) = sample_node(oracle, t, cfg.alpha)?;
            let d_v = oracle.deg(v)?;
            sum_ratio += d_t as f64 / d_v as f64;
            d_seen = d_seen.min(d_v);
            moves += m;
        }
        walks += batch;
        // sum_ratio * d_seen / d_t = sum_i d_seen / d_v_i, each term in (0, 1].
        if sum_ratio * d_seen as f64 / d_t as f64 >= threshold {
            return Ok((sum_ratio / (walks as f64 * n), walks, moves));
        }
        batch = walks;
    }
}
