use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use backmc::estimators::{EstimatorConfig, EstimatorError, Mode};
use backmc::generators::{generate_er, generate_hard_instance, ErParams, HardInstanceParams};
use backmc::graph::GraphError;
use backmc::ground_truth::pagerank_power;
use backmc::harness::{
    fmt_f64, render_summary, run_estimator, run_experiment, summarize, validate_hard_family,
    write_records, Algorithm, ExperimentSpec, HarnessError, TargetMode,
};
use backmc::io::{load_edge_list, write_edge_list};
use backmc::{graph_stats, NodeId, UndirectedGraph};

#[derive(Parser)]
#[command(name = "backmc", version, about = "Single-node PageRank estimation on undirected graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an Erdős–Rényi G(n, p) edge list.
    GenEr {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        edge_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write one instance of the hard family and print its target id.
    GenHard {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        max_level: usize,
        #[arg(long)]
        group_size: usize,
        #[arg(long)]
        hub_count: usize,
        #[arg(long)]
        pad_to_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Power-iteration PageRank for every node, as `node,score` CSV.
    GroundTruth {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one estimator on one target.
    Estimate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        target: u64,
        #[arg(long, value_parser = parse_algo)]
        algo: Algorithm,
        #[arg(long, default_value_t = 0.2)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1)]
        c: f64,
        #[arg(long, default_value_t = 0.1)]
        pf: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Fixed)]
        mode: ModeArg,
        #[arg(long)]
        rmax: Option<f64>,
    },
    /// Run a grid of trials and write one CSV row per trial.
    Experiment {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_algo, default_value = "backmc")]
        algos: Vec<Algorithm>,
        #[arg(long, default_value_t = 0.2)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        c_grid: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        pf: f64,
        #[arg(long, default_value_t = 10)]
        targets: usize,
        #[arg(long, value_parser = parse_target_mode, default_value = "uniform")]
        target_mode: TargetMode,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Fixed)]
        mode: ModeArg,
        #[arg(long)]
        rmax: Option<f64>,
        #[arg(long, default_value_t = EstimatorConfig::DEFAULT_MC_WALK_CAP)]
        mc_walk_cap: u64,
        /// Fill `wall_time_ns`; rows are then no longer reproducible.
        #[arg(long)]
        record_wall_time: bool,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score the target across levels 0..=max-level of the hard family.
    ValidateHard {
        #[arg(long)]
        max_level: usize,
        #[arg(long)]
        group_size: usize,
        #[arg(long)]
        hub_count: usize,
        #[arg(long)]
        pad_to_n: usize,
        #[arg(long, default_value_t = 0.2)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Fixed,
    Adaptive,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Fixed => Mode::Fixed,
            ModeArg::Adaptive => Mode::Adaptive,
        }
    }
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: HarnessError| e.to_string())
}

fn parse_target_mode(s: &str) -> Result<TargetMode, String> {
    s.parse().map_err(|e: HarnessError| e.to_string())
}

enum Failure {
    Param(String),
    Input(String),
    Refusal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Param(_) => 2,
            Self::Input(_) => 3,
            Self::Refusal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Param(m) | Self::Input(m) | Self::Refusal(m) => m,
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Param(_) => Self::Param(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Param(_) => Self::Param(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<EstimatorError> for Failure {
    fn from(e: EstimatorError) -> Self {
        match e {
            EstimatorError::IsolatedTarget { .. } => Self::Refusal(e.to_string()),
            _ => Self::Param(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> Result<UndirectedGraph, Failure> {
    let file = File::open(path).map_err(|e| io_failure(path, e))?;
    let loaded = load_edge_list(BufReader::new(file))?;
    if loaded.duplicates > 0 {
        eprintln!("note: dropped {} duplicate edges", loaded.duplicates);
    }
    Ok(loaded.graph)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| io_failure(path, e))
}

fn save_graph(g: &UndirectedGraph, path: &Path) -> Result<(), Failure> {
    let mut out = create(path)?;
    write_edge_list(g, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| io_failure(path, e))
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn check_target(g: &UndirectedGraph, target: u64) -> Result<NodeId, Failure> {
    if target >= g.num_nodes() as u64 {
        return Err(Failure::Param(format!(
            "target {target} out of range for n={}",
            g.num_nodes()
        )));
    }
    Ok(target as NodeId)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::GenEr { n, edge_prob, seed, out } => {
            let g = generate_er(ErParams { n, edge_prob, seed })?;
            save_graph(&g, &out)?;
            println!("n={} m={}", g.num_nodes(), g.num_edges());
        }
        Command::GenHard { level, max_level, group_size, hub_count, pad_to_n, seed, out } => {
            let params = HardInstanceParams { level, max_level, group_size, hub_count, pad_to_n, seed };
            let (g, t) = generate_hard_instance(params)?;
            save_graph(&g, &out)?;
            println!("{t}");
        }
        Command::GroundTruth { graph, alpha, out } => {
            let g = load_graph(&graph)?;
            let pr = pagerank_power(&g, alpha, None).map_err(|e| Failure::Param(e.to_string()))?;
            let mut w = create(&out)?;
            let body = (|| -> std::io::Result<()> {
                writeln!(w, "node,score")?;
                for (u, s) in pr.values.iter().enumerate() {
                    writeln!(w, "{u},{}", fmt_f64(*s))?;
                }
                w.flush()
            })();
            body.map_err(|e| io_failure(&out, e))?;
        }
        Command::Estimate { graph, target, algo, alpha, c, pf, seed, mode, rmax } => {
            let g = load_graph(&graph)?;
            let t = check_target(&g, target)?;
            if let Some(r) = rmax {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(Failure::Param(format!("rmax must be positive, got {r}")));
                }
            }
            let cfg = EstimatorConfig::new(alpha, c, pf).with_seed(seed).with_mode(mode.into());
            cfg.validate()?;
            let stats = graph_stats(&g);
            let est = run_estimator(&g, &stats, algo, t, &cfg, rmax)?;
            println!("estimate={}", fmt_f64(est.value));
            println!(
                "deg_calls={} neigh_calls={} jump_calls={} total_queries={}",
                est.counters.deg_calls,
                est.counters.neigh_calls,
                est.counters.jump_calls,
                est.counters.total()
            );
            println!("walks={} moves={}", est.walks, est.moves);
            if est.budget_exhausted {
                println!("budget_exhausted=true");
            }
        }
        Command::Experiment {
            graph,
            algos,
            alpha,
            c_grid,
            pf,
            targets,
            target_mode,
            trials,
            seed,
            mode,
            rmax,
            mc_walk_cap,
            record_wall_time,
            threads,
            out,
        } => {
            let g = load_graph(&graph)?;
            let spec = ExperimentSpec {
                dataset: dataset_name(&graph),
                algorithms: algos,
                alpha,
                c_grid,
                p_f: pf,
                target_mode,
                num_targets: targets,
                trials_per_target: trials,
                master_seed: seed,
                mode: mode.into(),
                r_max: rmax,
                mc_walk_cap,
                record_wall_time,
                threads,
            };
            let records = run_experiment(&spec, &g)?;
            let mut w = create(&out)?;
            write_records(&records, &mut w)?;
            w.flush().map_err(|e| io_failure(&out, e))?;
            print!("{}", render_summary(&summarize(&records)));
        }
        Command::ValidateHard { max_level, group_size, hub_count, pad_to_n, alpha, seed } => {
            let base = HardInstanceParams { level: 0, max_level, group_size, hub_count, pad_to_n, seed };
            let report = validate_hard_family(base, alpha)?;
            print!("{}", report.render());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
