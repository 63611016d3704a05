//! Single-target PageRank estimators.
//!
//! Every estimator is generic over [`GraphAccess`](crate::oracle::GraphAccess)
//! and never touches the graph structure directly, so its reported query
//! counts are exactly what it cost under the arc-centric access model.

mod backmc;
mod backward_push;
mod mc;
mod sampler;
mod setpush;

use std::time::Duration;

use thiserror::Error;

use crate::graph::NodeId;
use crate::oracle::{OracleError, QueryCounters};

pub use backmc::{backmc, backmc_single_run, plan_backmc, sample_q, BackMCPlan, PartialEstimate};
pub use backward_push::{backward_push, default_r_max, BackwardPushState};
pub use mc::mc_global;
pub use sampler::sample_node;
pub use setpush::{plan_setpush, setpush, setpush_single_run, SetPushPlan, SetPushState};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    /// A degree-0 target has score exactly `alpha / n`; no sampling is needed.
    #[error("isolated target: pi(t) = alpha/n = {exact} exactly")]
    IsolatedTarget { target: Option<NodeId>, exact: f64 },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("median needs a non-empty odd-length list, got {0} values")]
    MedianLength(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Walk count sized up front from `m` and the minimum degree.
    #[default]
    Fixed,
    /// Doubling walk batches until a sequential stopping rule fires.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub alpha: f64,
    /// Relative-error target.
    pub c: f64,
    /// Failure-probability target.
    pub p_f: f64,
    /// Seed the caller used for the oracle's stream; carried for bookkeeping.
    pub seed: u64,
    pub mode: Mode,
    /// Hard cap on global Monte-Carlo walks.
    pub mc_walk_cap: u64,
}

impl EstimatorConfig {
    pub const DEFAULT_MC_WALK_CAP: u64 = 100_000_000;

    pub fn new(alpha: f64, c: f64, p_f: f64) -> Self {
        Self {
            alpha,
            c,
            p_f,
            seed: 0,
            mode: Mode::Fixed,
            mc_walk_cap: Self::DEFAULT_MC_WALK_CAP,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<(), EstimatorError> {
        check_alpha(self.alpha)?;
        for (name, v) in [("c", self.c), ("p_f", self.p_f)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(EstimatorError::Param(format!("{name} must be in (0, 1), got {v}")));
            }
        }
        if self.mc_walk_cap == 0 {
            return Err(EstimatorError::Param("mc_walk_cap must be positive".into()));
        }
        Ok(())
    }

    /// Hit threshold of the sequential stopping rule on `[0, 1]` increments:
    /// `4 (e - 2) (1 + c) ln(2 / p_f) / c^2`.
    pub fn stopping_threshold(&self) -> f64 {
        let c = self.c;
        4.0 * (std::f64::consts::E - 2.0) * (1.0 + c) * (2.0 / self.p_f).ln() / (c * c)
    }

    /// Number of median repetitions: the smallest odd integer at least
    /// `ceil(18 ln(1 / p_f))`.
    pub fn median_runs(&self) -> usize {
        let k = (18.0 * (1.0 / self.p_f).ln()).ceil().max(1.0) as usize;
        if k.is_multiple_of(2) {
            k + 1
        } else {
            k
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), EstimatorError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(EstimatorError::Param(format!("alpha must be in (0, 1), got {alpha}")))
    }
}

/// Result of one estimator invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Oracle queries issued by this invocation only.
    pub counters: QueryCounters,
    pub walks: u64,
    pub moves: u64,
    pub elapsed: Duration,
    /// Set when a walk cap stopped the estimator before its stopping rule.
    pub budget_exhausted: bool,
}

/// Exact middle order statistic of an odd-length list.
pub fn median_of_runs(values: &[f64]) -> Result<f64, EstimatorError> {
    if values.is_empty() || values.len().is_multiple_of(2) {
        return Err(EstimatorError::MedianLength(values.len()));
    }
    let mut v = values.to_vec();
    let mid = v.len() / 2;
    let (_, m, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    Ok(*m)
}

/// `x.ceil()`, ignoring floating-point noise a few ulps above an integer.
pub(crate) fn ceil_noise_tolerant(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}
