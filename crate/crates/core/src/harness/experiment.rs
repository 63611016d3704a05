//! Trial execution and the trial CSV format.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;

use super::{sample_targets, HarnessError, TargetMode};
use crate::estimators::{
    backmc, backward_push, default_r_max, mc_global, setpush, Estimate, EstimatorConfig,
    EstimatorError, Mode,
};
use crate::graph::{graph_stats, GraphStats, NodeId, UndirectedGraph};
use crate::ground_truth::{pagerank_power, relative_error};
use crate::oracle::GraphOracle;
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    BackMC,
    Mc,
    BackwardPush,
    SetPush,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Self::BackMC, Self::Mc, Self::BackwardPush, Self::SetPush];

    pub fn name(self) -> &'static str {
        match self {
            Self::BackMC => "backmc",
            Self::Mc => "mc",
            Self::BackwardPush => "backwardpush",
            Self::SetPush => "setpush",
        }
    }

    fn stream_id(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                HarnessError::Param(format!(
                    "unknown algorithm '{s}' (expected backmc|mc|backwardpush|setpush)"
                ))
            })
    }
}

/// Runs one estimator on a fresh oracle seeded with `seed`.
///
/// `r_max` applies to backward push only; `None` selects `c * alpha / n`.
pub fn run_estimator(
    g: &UndirectedGraph,
    stats: &GraphStats,
    algo: Algorithm,
    target: NodeId,
    cfg: &EstimatorConfig,
    r_max: Option<f64>,
) -> Result<Estimate, EstimatorError> {
    let mut oracle = GraphOracle::new(g, cfg.seed);
    match algo {
        Algorithm::BackMC => backmc(&mut oracle, target, cfg, Some(stats)),
        Algorithm::Mc => mc_global(&mut oracle, target, cfg),
        Algorithm::BackwardPush => {
            let r_max = r_max.unwrap_or_else(|| default_r_max(g.num_nodes(), cfg.alpha, cfg.c));
            backward_push(&mut oracle, target, cfg.alpha, r_max).map(|(e, _)| e)
        }
        Algorithm::SetPush => setpush(&mut oracle, target, cfg, stats),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Name written into the `dataset` column.
    pub dataset: String,
    pub algorithms: Vec<Algorithm>,
    pub alpha: f64,
    pub c_grid: Vec<f64>,
    pub p_f: f64,
    pub target_mode: TargetMode,
    pub num_targets: usize,
    pub trials_per_target: usize,
    pub master_seed: u64,
    pub mode: Mode,
    pub r_max: Option<f64>,
    pub mc_walk_cap: u64,
    /// Wall-clock times make output non-reproducible; off by default.
    pub record_wall_time: bool,
    /// Worker threads; `None` uses rayon's default pool.
    pub threads: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(dataset: impl Into<String>) -> Self {
        Self {
            dataset: dataset.into(),
            algorithms: vec![Algorithm::BackMC],
            alpha: 0.2,
            c_grid: vec![0.1],
            p_f: 0.1,
            target_mode: TargetMode::Uniform,
            num_targets: 10,
            trials_per_target: 1,
            master_seed: 0,
            mode: Mode::Fixed,
            r_max: None,
            mc_walk_cap: EstimatorConfig::DEFAULT_MC_WALK_CAP,
            record_wall_time: false,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |m: &str| Err(HarnessError::Param(m.to_string()));
        if self.algorithms.is_empty() {
            return fail("algorithm list is empty");
        }
        if self.c_grid.is_empty() {
            return fail("c grid is empty");
        }
        if let Some(c) = self.c_grid.iter().find(|&&c| !(c > 0.01 && c <= 0.5)) {
            return Err(HarnessError::Param(format!("c = {c} outside (0.01, 0.5]")));
        }
        if self.num_targets == 0 {
            return fail("need at least one target");
        }
        if self.trials_per_target == 0 {
            return fail("need at least one trial per target");
        }
        if let Some(r) = self.r_max {
            if r.is_nan() || r <= 0.0 {
                return fail("r_max must be positive");
            }
        }
        if self.threads == Some(0) {
            return fail("threads must be positive");
        }
        EstimatorConfig::new(self.alpha, self.c_grid[0], self.p_f)
            .validate()
            .map_err(|e| HarnessError::Param(e.to_string()))
    }

    /// Seed of the oracle stream for one trial.
    pub fn trial_seed(&self, algo: Algorithm, target: NodeId, c: f64, trial: usize) -> u64 {
        derive_seed(
            self.master_seed,
            &[algo.stream_id(), target as u64, c.to_bits(), trial as u64],
        )
    }

    pub fn target_seed(&self) -> u64 {
        derive_seed(self.master_seed, &[0])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub algo: Algorithm,
    pub dataset: String,
    pub target: NodeId,
    pub alpha: f64,
    pub c: f64,
    pub p_f: f64,
    pub seed: u64,
    pub estimate: f64,
    pub ground_truth: f64,
    pub rel_error: f64,
    pub deg_calls: u64,
    pub neigh_calls: u64,
    pub jump_calls: u64,
    pub total_queries: u64,
    pub walks: u64,
    pub moves: u64,
    pub wall_time_ns: u64,
    /// Empty for successful trials; otherwise the estimator's refusal.
    pub error: String,
}

pub const CSV_HEADER: [&str; 18] = [
    "algo",
    "dataset",
    "target",
    "alpha",
    "c",
    "p_f",
    "seed",
    "estimate",
    "ground_truth",
    "rel_error",
    "deg_calls",
    "neigh_calls",
    "jump_calls",
    "total_queries",
    "walks",
    "moves",
    "wall_time_ns",
    "error",
];

/// Lossless decimal rendering with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl TrialRecord {
    pub fn is_failed(&self) -> bool {
        !self.error.is_empty()
    }

    /// Checks the fields that are recomputable from other fields.
    pub fn check_consistency(&self) -> Result<(), String> {
        let total = self.deg_calls + self.neigh_calls + self.jump_calls;
        if total != self.total_queries {
            return Err(format!("total_queries {} != {total}", self.total_queries));
        }
        if self.is_failed() {
            return Ok(());
        }
        let re = relative_error(self.estimate, self.ground_truth).map_err(|e| e.to_string())?;
        if re != self.rel_error {
            return Err(format!("rel_error {} != recomputed {re}", self.rel_error));
        }
        if self.estimate < 0.0 {
            return Err(format!("negative estimate {}", self.estimate));
        }
        Ok(())
    }

    fn to_fields(&self) -> Vec<String> {
        vec![
            self.algo.name().to_string(),
            self.dataset.clone(),
            self.target.to_string(),
            fmt_f64(self.alpha),
            fmt_f64(self.c),
            fmt_f64(self.p_f),
            self.seed.to_string(),
            fmt_f64(self.estimate),
            fmt_f64(self.ground_truth),
            fmt_f64(self.rel_error),
            self.deg_calls.to_string(),
            self.neigh_calls.to_string(),
            self.jump_calls.to_string(),
            self.total_queries.to_string(),
            self.walks.to_string(),
            self.moves.to_string(),
            self.wall_time_ns.to_string(),
            self.error.clone(),
        ]
    }

    fn from_fields(r: &csv::StringRecord) -> Result<Self, HarnessError> {
        if r.len() != CSV_HEADER.len() {
            return Err(HarnessError::Format(format!(
                "expected {} fields, got {}",
                CSV_HEADER.len(),
                r.len()
            )));
        }
        fn num<T: FromStr>(r: &csv::StringRecord, i: usize) -> Result<T, HarnessError> {
            r[i].parse().map_err(|_| {
                HarnessError::Format(format!("bad value '{}' in column {}", &r[i], CSV_HEADER[i]))
            })
        }
        Ok(Self {
            algo: r[0].parse()?,
            dataset: r[1].to_string(),
            target: num(r, 2)?,
            alpha: num(r, 3)?,
            c: num(r, 4)?,
            p_f: num(r, 5)?,
            seed: num(r, 6)?,
            estimate: num(r, 7)?,
            ground_truth: num(r, 8)?,
            rel_error: num(r, 9)?,
            deg_calls: num(r, 10)?,
            neigh_calls: num(r, 11)?,
            jump_calls: num(r, 12)?,
            total_queries: num(r, 13)?,
            walks: num(r, 14)?,
            moves: num(r, 15)?,
            wall_time_ns: num(r, 16)?,
            error: r[17].to_string(),
        })
    }
}

pub fn write_records<W: Write>(records: &[TrialRecord], out: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| HarnessError::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for rec in records {
        w.write_record(rec.to_fields()).map_err(io)?;
    }
    w.flush().map_err(|e| HarnessError::Io(e.to_string()))
}

pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut buf = Vec::new();
    write_records(records, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<TrialRecord>, HarnessError> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(|e| HarnessError::Format(e.to_string()))?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(HarnessError::Format("unexpected CSV header".into()));
    }
    rdr.records()
        .map(|r| {
            let r = r.map_err(|e| HarnessError::Format(e.to_string()))?;
            TrialRecord::from_fields(&r)
        })
        .collect()
}

struct Job {
    algo: Algorithm,
    target: NodeId,
    c: f64,
    trial: usize,
}

/// Runs every `(algo, target, c, trial)` combination in that canonical order.
///
/// Ground truth is computed once; trials run in parallel, each on its own
/// oracle, and the output does not depend on scheduling. Estimator refusals
/// become rows with a non-empty `error` column.
pub fn run_experiment(
    spec: &ExperimentSpec,
    g: &UndirectedGraph,
) -> Result<Vec<TrialRecord>, HarnessError> {
    spec.validate()?;
    let stats = graph_stats(g);
    let truth = pagerank_power(g, spec.alpha, None).map_err(|e| HarnessError::Param(e.to_string()))?;
    let targets = sample_targets(g, spec.num_targets, spec.target_mode, spec.target_seed())?;

    let mut jobs = Vec::new();
    for &algo in &spec.algorithms {
        for &target in &targets {
            for &c in &spec.c_grid {
                for trial in 0..spec.trials_per_target {
                    jobs.push(Job { algo, target, c, trial });
                }
            }
        }
    }

    let run_one = |job: &Job| -> TrialRecord {
        let seed = spec.trial_seed(job.algo, job.target, job.c, job.trial);
        let mut cfg = EstimatorConfig::new(spec.alpha, job.c, spec.p_f)
            .with_seed(seed)
            .with_mode(spec.mode);
        cfg.mc_walk_cap = spec.mc_walk_cap;
        let ground_truth = truth.get(job.target);
        let mut rec = TrialRecord {
            algo: job.algo,
            dataset: spec.dataset.clone(),
            target: job.target,
            alpha: spec.alpha,
            c: job.c,
            p_f: spec.p_f,
            seed,
            estimate: 0.0,
            ground_truth,
            rel_error: 0.0,
            deg_calls: 0,
            neigh_calls: 0,
            jump_calls: 0,
            total_queries: 0,
            walks: 0,
            moves: 0,
            wall_time_ns: 0,
            error: String::new(),
        };
        match run_estimator(g, &stats, job.algo, job.target, &cfg, spec.r_max) {
            Ok(est) => {
                rec.estimate = est.value;
                rec.rel_error = relative_error(est.value, ground_truth).unwrap_or(f64::NAN);
                rec.deg_calls = est.counters.deg_calls;
                rec.neigh_calls = est.counters.neigh_calls;
                rec.jump_calls = est.counters.jump_calls;
                rec.total_queries = est.counters.total();
                rec.walks = est.walks;
                rec.moves = est.moves;
                if spec.record_wall_time {
                    rec.wall_time_ns = est.elapsed.as_nanos() as u64;
                }
                if est.budget_exhausted {
                    rec.error = "budget exhausted".into();
                }
            }
            Err(e) => rec.error = e.to_string(),
        }
        rec
    };

    let records = match spec.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| HarnessError::Param(e.to_string()))?
            .install(|| jobs.par_iter().map(run_one).collect()),
        None => jobs.par_iter().map(run_one).collect(),
    };
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn spec() -> ExperimentSpec {
        ExperimentSpec {
            algorithms: vec![Algorithm::BackMC, Algorithm::BackwardPush],
            c_grid: vec![0.2, 0.5],
            num_targets: 3,
            trials_per_target: 5,
            master_seed: 77,
            ..ExperimentSpec::new("k10")
        }
    }

    #[test]
    fn cardinality_and_order() {
        let g = complete(10);
        let recs = run_experiment(&spec(), &g).unwrap();
        assert_eq!(recs.len(), 2 * 3 * 2 * 5);
        assert!(recs[..30].iter().all(|r| r.algo == Algorithm::BackMC));
        assert_eq!(recs[0].c, 0.2);
        assert_eq!(recs[5].c, 0.5);
    }

    #[test]
    fn backmc_exact_on_complete_graph() {
        let g = complete(10);
        let recs = run_experiment(&spec(), &g).unwrap();
        for r in recs.iter().filter(|r| r.algo == Algorithm::BackMC) {
            assert_eq!(r.estimate, 0.1);
            r.check_consistency().unwrap();
        }
    }

    #[test]
    fn csv_round_trip_and_determinism() {
        let g = star(6);
        let a = records_to_csv(&run_experiment(&spec(), &g).unwrap());
        let b = records_to_csv(&run_experiment(&ExperimentSpec { threads: Some(1), ..spec() }, &g).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(&CSV_HEADER.join(",")));
        let back = read_records(a.as_bytes()).unwrap();
        assert_eq!(records_to_csv(&back), a);
    }

    #[test]
    fn exhausted_budget_is_tagged_not_fatal() {
        let g = cycle(200);
        let s = ExperimentSpec {
            algorithms: vec![Algorithm::Mc, Algorithm::BackMC],
            mc_walk_cap: 10,
            ..spec()
        };
        let recs = run_experiment(&s, &g).unwrap();
        assert_eq!(recs.len(), 60);
        for r in &recs {
            assert_eq!(r.is_failed(), r.algo == Algorithm::Mc);
            r.check_consistency().unwrap();
        }
    }

    #[test]
    fn out_of_range_c_rejected() {
        let g = star(4);
        assert!(run_experiment(&ExperimentSpec { c_grid: vec![0.6], ..spec() }, &g).is_err());
    }

    #[test]
    fn refusal_becomes_error_row() {
        let (g, _) = UndirectedGraph::from_edges(3, [(0, 1)]).unwrap();
        let stats = graph_stats(&g);
        let cfg = EstimatorConfig::new(0.2, 0.1, 0.1);
        let err = run_estimator(&g, &stats, Algorithm::SetPush, 2, &cfg, None).unwrap_err();
        assert!(matches!(err, EstimatorError::IsolatedTarget { .. }));
    }

    #[test]
    fn parse_algorithms() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("rbs".parse::<Algorithm>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(ExperimentSpec { algorithms: vec![], ..spec() }.validate().is_err());
        assert!(ExperimentSpec { c_grid: vec![], ..spec() }.validate().is_err());
        assert!(ExperimentSpec { c_grid: vec![0.01], ..spec() }.validate().is_err());
        assert!(ExperimentSpec { num_targets: 0, ..spec() }.validate().is_err());
        assert!(ExperimentSpec { alpha: 1.0, ..spec() }.validate().is_err());
        assert!(spec().validate().is_ok());
    }

    #[test]
    fn consistency_checker_catches_tampering() {
        let g = complete(10);
        let mut r = run_experiment(&spec(), &g).unwrap().remove(0);
        r.total_queries += 1;
        assert!(r.check_consistency().is_err());
    }

    #[test]
    fn float_format_is_lossless() {
        for x in [17.0 / 36.0, 1e-300, 0.1, 123456.789] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
    }
}
