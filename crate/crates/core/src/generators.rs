//! Synthetic graph families: Erdős–Rényi G(n, p) and the layered
//! hard-instance family whose target score grows by a constant factor per level.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{GraphError, NodeId, UndirectedGraph};
use crate::rng::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErParams {
    pub n: usize,
    pub edge_prob: f64,
    pub seed: u64,
}

/// G(n, p) with geometric skipping over the lower-triangular pair sequence,
/// so the cost is proportional to the number of edges produced while each
/// pair is still an independent Bernoulli(p) trial.
pub fn generate_er(params: ErParams) -> Result<UndirectedGraph, GraphError> {
    let ErParams { n, edge_prob: p, seed } = params;
    if !(p > 0.0 && p <= 1.0) {
        return Err(GraphError::Param(format!("edge_prob must be in (0, 1], got {p}")));
    }
    if n > NodeId::MAX as usize {
        return Err(GraphError::Param(format!("n={n} too large")));
    }
    let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
    if p == 1.0 {
        for u in 0..n as NodeId {
            for v in u + 1..n as NodeId {
                pairs.push((u, v));
            }
        }
        return Ok(UndirectedGraph::from_sorted_unique(n, &pairs));
    }

    let mut rng = seeded_rng(seed);
    let log_q = (1.0 - p).ln();
    // Pairs are visited as (w, v) with w < v, v ascending.
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.random();
        let skip = ((1.0 - r).ln() / log_q).floor();
        // Saturate: a skip past every remaining pair ends generation.
        let skip = if skip.is_finite() && skip < (n as f64) * (n as f64) {
            skip as i64
        } else {
            i64::MAX / 4
        };
        w += 1 + skip;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            pairs.push((w as NodeId, v as NodeId));
        }
    }
    pairs.sort_unstable();
    Ok(UndirectedGraph::from_sorted_unique(n, &pairs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HardInstanceParams {
    pub level: usize,
    pub max_level: usize,
    pub group_size: usize,
    pub hub_count: usize,
    pub pad_to_n: usize,
    pub seed: u64,
}

impl HardInstanceParams {
    pub fn nodes_used(&self) -> usize {
        1 + self.level * self.group_size + self.hub_count
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let fail = |m: String| Err(GraphError::Param(m));
        if self.max_level < 2 {
            return fail(format!("max_level must be >= 2, got {}", self.max_level));
        }
        if self.level > self.max_level {
            return fail(format!("level {} exceeds max_level {}", self.level, self.max_level));
        }
        if self.group_size < 2 {
            return fail(format!("group_size must be >= 2, got {}", self.group_size));
        }
        if self.hub_count < 2 {
            return fail(format!("hub_count must be >= 2, got {}", self.hub_count));
        }
        if self.pad_to_n < self.nodes_used() {
            return fail(format!(
                "pad_to_n={} is smaller than the {} nodes the construction needs",
                self.pad_to_n,
                self.nodes_used()
            ));
        }
        if self.pad_to_n > NodeId::MAX as usize {
            return fail(format!("pad_to_n={} too large", self.pad_to_n));
        }
        Ok(())
    }
}

/// Builds instance `level` of the family and returns it with the target id.
///
/// The target is joined to `level` cliques of `group_size` nodes and to one
/// clique of `hub_count` hubs; every clique member is also adjacent to the
/// target, so group nodes have degree `group_size` and hubs `hub_count`.
/// Remaining nodes up to `pad_to_n` are isolated, and all ids are shuffled.
pub fn generate_hard_instance(
    params: HardInstanceParams,
) -> Result<(UndirectedGraph, NodeId), GraphError> {
    params.validate()?;
    let n = params.pad_to_n;
    let mut perm: Vec<NodeId> = (0..n as NodeId).collect();
    perm.shuffle(&mut seeded_rng(params.seed));

    let target = 0usize;
    let mut next = 1usize;
    let mut raw: Vec<(usize, usize)> = Vec::new();
    let clique = |start: usize, size: usize, raw: &mut Vec<(usize, usize)>| {
        for a in start..start + size {
            raw.push((target, a));
            for b in a + 1..start + size {
                raw.push((a, b));
            }
        }
    };
    for _ in 0..params.level {
        clique(next, params.group_size, &mut raw);
        next += params.group_size;
    }
    clique(next, params.hub_count, &mut raw);

    let mut pairs: Vec<(NodeId, NodeId)> = raw
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    pairs.sort_unstable();
    Ok((UndirectedGraph::from_sorted_unique(n, &pairs), perm[target]))
}
