//! Power-iteration PageRank and personalized PageRank, plus relative error.
//!
//! Degree-0 nodes contribute no outgoing mass: their score is exactly
//! `alpha / n` and the PageRank vector then sums to less than one.

use thiserror::Error;

use crate::graph::{NodeId, UndirectedGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroundTruthError {
    #[error("alpha must be in (0, 1), got {0}")]
    Alpha(f64),
    #[error("source node {node} out of range for n={n}")]
    Source { node: NodeId, n: usize },
    #[error("relative error needs a positive ground truth, got {0}")]
    NonPositiveTruth(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreKind {
    PageRank,
    Ppr { source: NodeId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub values: Vec<f64>,
    pub alpha: f64,
    pub iterations: usize,
    pub kind: ScoreKind,
}

impl ScoreVector {
    pub fn get(&self, u: NodeId) -> f64 {
        self.values[u as usize]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

fn check_alpha(alpha: f64) -> Result<(), GroundTruthError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(GroundTruthError::Alpha(alpha))
    }
}

/// `ceil(log_{1-alpha}(1e-4 * alpha / n))`, the fixed iteration count used
/// for ground truth.
pub fn default_iterations(n: usize, alpha: f64) -> usize {
    let n = n.max(1) as f64;
    ((0.0001 * alpha / n).ln() / (1.0 - alpha).ln()).ceil().max(1.0) as usize
}

/// Smallest walk-length cutoff whose geometric tail `(1-alpha)^(L+1)` is
/// below `1e-13`.
fn tail_cutoff(alpha: f64) -> usize {
    ((1e-13f64).ln() / (1.0 - alpha).ln()).ceil().max(1.0) as usize
}

/// Iterates `pi <- (1-alpha) A D^-1 pi + alpha/n` from the uniform vector.
pub fn pagerank_power(
    g: &UndirectedGraph,
    alpha: f64,
    iterations: Option<usize>,
) -> Result<ScoreVector, GroundTruthError> {
    check_alpha(alpha)?;
    let n = g.num_nodes();
    let iterations = iterations.unwrap_or_else(|| default_iterations(n, alpha));
    if n == 0 {
        return Ok(ScoreVector {
            values: Vec::new(),
            alpha,
            iterations,
            kind: ScoreKind::PageRank,
        });
    }
    let inv_deg: Vec<f64> = g
        .nodes()
        .map(|u| match g.degree(u) {
            0 => 0.0,
            d => 1.0 / d as f64,
        })
        .collect();
    let teleport = alpha / n as f64;
    let mut pi = vec![1.0 / n as f64; n];
    let mut share = vec![0.0; n];
    for _ in 0..iterations {
        for (s, (p, w)) in share.iter_mut().zip(pi.iter().zip(&inv_deg)) {
            *s = p * w;
        }
        for u in g.nodes() {
            let inflow: f64 = g.neighbors(u).iter().map(|&v| share[v as usize]).sum();
            pi[u as usize] = (1.0 - alpha) * inflow + teleport;
        }
    }
    Ok(ScoreVector {
        values: pi,
        alpha,
        iterations,
        kind: ScoreKind::PageRank,
    })
}

/// Termination distribution of an alpha-discounted walk from `source`,
/// accumulated over walk lengths `0..=iterations`.
///
/// The default cutoff is the ground-truth iteration count, raised when
/// needed so that the truncated tail mass is below `1e-13`.
pub fn ppr_power(
    g: &UndirectedGraph,
    source: NodeId,
    alpha: f64,
    iterations: Option<usize>,
) -> Result<ScoreVector, GroundTruthError> {
    check_alpha(alpha)?;
    let n = g.num_nodes();
    if source as usize >= n {
        return Err(GroundTruthError::Source { node: source, n });
    }
    let iterations = iterations
        .unwrap_or_else(|| default_iterations(n, alpha).max(tail_cutoff(alpha)));
    let kind = ScoreKind::Ppr { source };
    let mut acc = vec![0.0; n];
    if g.degree(source) == 0 {
        acc[source as usize] = 1.0;
        return Ok(ScoreVector { values: acc, alpha, iterations, kind });
    }

    let mut x = vec![0.0; n];
    x[source as usize] = 1.0;
    let mut next = vec![0.0; n];
    let mut weight = alpha;
    acc[source as usize] = alpha;
    for _ in 0..iterations {
        next.iter_mut().for_each(|v| *v = 0.0);
        for u in g.nodes() {
            let mass = x[u as usize];
            if mass == 0.0 {
                continue;
            }
            let nbrs = g.neighbors(u);
            let share = mass / nbrs.len() as f64;
            for &v in nbrs {
                next[v as usize] += share;
            }
        }
        std::mem::swap(&mut x, &mut next);
        weight *= 1.0 - alpha;
        for (a, &v) in acc.iter_mut().zip(&x) {
            *a += weight * v;
        }
    }
    Ok(ScoreVector { values: acc, alpha, iterations, kind })
}

pub fn relative_error(estimate: f64, truth: f64) -> Result<f64, GroundTruthError> {
    if truth > 0.0 {
        Ok((truth - estimate).abs() / truth)
    } else {
        Err(GroundTruthError::NonPositiveTruth(truth))
    }
}
