use std::collections::HashSet;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use super::HarnessError;
use crate::graph::{NodeId, UndirectedGraph};
use crate::rng::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TargetMode {
    /// Uniform over nodes with degree at least one.
    #[default]
    Uniform,
    /// Each draw picks `u` with probability `d_u / 2m`; repeats are redrawn.
    Degree,
}

impl FromStr for TargetMode {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "degree" => Ok(Self::Degree),
            other => Err(HarnessError::Param(format!(
                "unknown target mode '{other}' (expected uniform|degree)"
            ))),
        }
    }
}

/// Draws `k` distinct non-isolated targets, deterministically per seed.
pub fn sample_targets(
    g: &UndirectedGraph,
    k: usize,
    mode: TargetMode,
    seed: u64,
) -> Result<Vec<NodeId>, HarnessError> {
    let eligible: Vec<NodeId> = g.nodes().filter(|&u| g.degree(u) > 0).collect();
    if k > eligible.len() {
        return Err(HarnessError::Param(format!(
            "asked for {k} targets but only {} nodes have degree >= 1",
            eligible.len()
        )));
    }
    let mut rng = seeded_rng(seed);
    match mode {
        TargetMode::Uniform => {
            let mut picks: Vec<NodeId> = index::sample(&mut rng, eligible.len(), k)
                .iter()
                .map(|i| eligible[i])
                .collect();
            picks.shuffle(&mut rng);
            Ok(picks)
        }
        TargetMode::Degree => {
            // Inverse-CDF on the cumulative degree array: arc position x in
            // [0, 2m) belongs to the node whose offset range contains it.
            let offsets = g.offsets();
            let arcs = *offsets.last().unwrap_or(&0);
            let mut seen = HashSet::with_capacity(k);
            let mut picks = Vec::with_capacity(k);
            while picks.len() < k {
                let x = rng.random_range(0..arcs);
                let u = offsets.partition_point(|&o| o <= x) - 1;
                if seen.insert(u) {
                    picks.push(u as NodeId);
                }
            }
            Ok(picks)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn exhaustive_sample_is_full_eligible_set() {
        let (g, _) = UndirectedGraph::from_edges(6, [(0, 1), (1, 2), (4, 5)]).unwrap();
        for mode in [TargetMode::Uniform, TargetMode::Degree] {
            let mut t = sample_targets(&g, 5, mode, 3).unwrap();
            t.sort_unstable();
            assert_eq!(t, vec![0, 1, 2, 4, 5]);
        }
    }

    #[test]
    fn too_many_targets() {
        let (g, _) = UndirectedGraph::from_edges(6, [(0, 1)]).unwrap();
        assert!(sample_targets(&g, 3, TargetMode::Uniform, 0).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let g = cycle(100);
        for mode in [TargetMode::Uniform, TargetMode::Degree] {
            assert_eq!(
                sample_targets(&g, 10, mode, 42).unwrap(),
                sample_targets(&g, 10, mode, 42).unwrap()
            );
        }
    }

    #[test]
    fn degree_mode_first_draw_favors_star_center() {
        let g = star(3);
        let seeds = 100_000u64;
        let hits = (0..seeds)
            .filter(|&s| sample_targets(&g, 1, TargetMode::Degree, s).unwrap()[0] == 0)
            .count();
        let p = hits as f64 / seeds as f64;
        assert!((p - 0.5).abs() < 0.005, "p = {p}");
    }

    #[test]
    fn parse_mode() {
        assert_eq!("degree".parse::<TargetMode>().unwrap(), TargetMode::Degree);
        assert!("x".parse::<TargetMode>().is_err());
    }
}
