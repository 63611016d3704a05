use crate::generators::{generate_hard_instance, HardInstanceParams};
use crate::graph::NodeId;
use crate::ground_truth::pagerank_power;

use super::HarnessError;

#[derive(Debug, Clone, PartialEq)]
pub struct LevelScore {
    pub level: usize,
    pub target: NodeId,
    pub target_degree: usize,
    pub num_edges: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardFamilyReport {
    pub alpha: f64,
    pub levels: Vec<LevelScore>,
    /// `score[i] / score[i - 1]` for `i = 1..=p`.
    pub ratios: Vec<f64>,
    /// Smallest observed `ratio - 1`.
    pub delta: f64,
}

impl HardFamilyReport {
    pub fn strictly_increasing(&self) -> bool {
        self.ratios.iter().all(|&r| r > 1.0)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("level,target,target_degree,num_edges,score,ratio\n");
        for (i, l) in self.levels.iter().enumerate() {
            let ratio = if i == 0 { String::new() } else { format!("{:.6}", self.ratios[i - 1]) };
            out.push_str(&format!(
                "{},{},{},{},{:.16e},{}\n",
                l.level, l.target, l.target_degree, l.num_edges, l.score, ratio
            ));
        }
        out.push_str(&format!(
            "delta={:.6} separation={}\n",
            self.delta,
            if self.strictly_increasing() { "ok" } else { "FAILED" }
        ));
        out
    }
}

/// Builds instances `0..=base.max_level` with shared parameters and reports
/// the ground-truth score of the target at each level.
pub fn validate_hard_family(
    base: HardInstanceParams,
    alpha: f64,
) -> Result<HardFamilyReport, HarnessError> {
    let mut levels = Vec::with_capacity(base.max_level + 1);
    for level in 0..=base.max_level {
        let params = HardInstanceParams { level, ..base };
        let (g, t) = generate_hard_instance(params).map_err(|e| HarnessError::Param(e.to_string()))?;
        let pr = pagerank_power(&g, alpha, None).map_err(|e| HarnessError::Param(e.to_string()))?;
        levels.push(LevelScore {
            level,
            target: t,
            target_degree: g.degree(t),
            num_edges: g.num_edges(),
            score: pr.get(t),
        });
    }
    let ratios: Vec<f64> = levels.windows(2).map(|w| w[1].score / w[0].score).collect();
    let delta = ratios.iter().fold(f64::INFINITY, |m, &r| m.min(r)) - 1.0;
    Ok(HardFamilyReport { alpha, levels, ratios, delta })
}
