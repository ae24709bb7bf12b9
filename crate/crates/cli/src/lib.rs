//! Command-line surface of the simulator.
//!
//! Subcommands: `run` (Monte Carlo sweep to CSV/JSON), `draw` (one topology
//! to SVG), `radius` (critical radius table) and `gain` (link gain between
//! two result files). Exit codes: 0 success, 1 runtime failure, 2 bad
//! arguments.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kjnn_core::io::{read_results, write_csv, write_histogram_csv, write_json};
use kjnn_core::svg::{render_svg, RenderOptions};
use kjnn_core::{
    critical_radius, link_gain, pairwise_rankings, run_experiment, sample_uniform_points, AggregateResult,
    ExperimentConfig, PruneRule, RadiusMode, TopologyKind,
};

pub const THREADS_ENV: &str = "KJNN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "kjnn", version, about = "Symmetric (k,j)-NN and composite topology simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a seeded Monte Carlo sweep and write aggregated results.
    Run(RunArgs),
    /// Sample one cloud, build one topology and write it as SVG.
    Draw(DrawArgs),
    /// Print the critical transmission radius for a range of node counts.
    Radius(RadiusArgs),
    /// Link gain per node between a baseline and a reduced result file.
    Gain(GainArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Topology {
    #[value(name = "sym-knn")]
    SymKnn,
    #[value(name = "kj-nn")]
    KjNn,
    #[value(name = "rgg")]
    Rgg,
    #[value(name = "kj-nn-rgg")]
    KjNnRgg,
}

impl From<Topology> for TopologyKind {
    fn from(t: Topology) -> Self {
        match t {
            Topology::SymKnn => TopologyKind::SymKnn,
            Topology::KjNn => TopologyKind::KjNn,
            Topology::Rgg => TopologyKind::Rgg,
            Topology::KjNnRgg => TopologyKind::KjNnRgg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Prune {
    Directed,
    Mutual,
}

impl From<Prune> for PruneRule {
    fn from(p: Prune) -> Self {
        match p {
            Prune::Directed => PruneRule::Directed,
            Prune::Mutual => PruneRule::Mutual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct TopologyArgs {
    #[arg(long, value_enum)]
    pub topology: Topology,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// Cut rank; links at ranks below j are pruned (kj-nn, kj-nn-rgg).
    #[arg(long, default_value_t = 3)]
    pub j: usize,
    /// Fixed transmission radius; overrides the formula radius.
    #[arg(long)]
    pub r: Option<f64>,
    /// Constant of the critical radius formula.
    #[arg(long, default_value_t = 3.0)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value_t = Prune::Directed)]
    pub prune: Prune,
}

impl TopologyArgs {
    fn radius_mode(&self) -> RadiusMode {
        match self.r {
            Some(r) => RadiusMode::Fixed { r },
            None => RadiusMode::Formula { sigma: self.sigma },
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,
    /// Node counts: a single value or `start:stop:step` (inclusive).
    #[arg(long, default_value = "100:1000:100", value_parser = parse_range)]
    pub n: NodeRange,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write the averaged degree histogram (`degree,proportion`).
    #[arg(long)]
    pub histogram_out: Option<PathBuf>,
    /// Node count whose histogram is written; defaults to the last in the sweep.
    #[arg(long)]
    pub histogram_n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DrawArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Canvas width and height in pixels.
    #[arg(long, default_value_t = 600)]
    pub canvas: u32,
    #[arg(long, default_value_t = 20)]
    pub margin: u32,
    #[arg(long, default_value_t = 3.0)]
    pub node_radius: f64,
    #[arg(long, default_value_t = 1.0)]
    pub stroke_width: f64,
    #[arg(long, default_value = "#1f4e99")]
    pub node_fill: String,
    #[arg(long, default_value = "#7a7a7a")]
    pub edge_stroke: String,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 3.0)]
    pub sigma: f64,
    #[arg(long, default_value = "100:1000:100", value_parser = parse_range)]
    pub n: NodeRange,
}

#[derive(Debug, Args)]
pub struct GainArgs {
    /// Baseline results (e.g. symmetric 5-NN), CSV or JSON.
    #[arg(long)]
    pub base: PathBuf,
    /// Reduced topology results on the same node counts.
    #[arg(long)]
    pub reduced: PathBuf,
}

/// Inclusive list of node counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRange(pub Vec<usize>);

/// Parses `N` or `start:stop:step` (inclusive of `stop` when on the grid).
pub fn parse_range(s: &str) -> Result<NodeRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}"));
    let (start, stop, step) = match parts.as_slice() {
        [one] => {
            let v = num(one)?;
            (v, v, 1)
        }
        [a, b] => (num(a)?, num(b)?, 1),
        [a, b, c] => (num(a)?, num(b)?, num(c)?),
        _ => return Err(format!("expected N or start:stop:step, got `{s}`")),
    };
    if step == 0 {
        return Err("step must be positive".into());
    }
    if start > stop {
        return Err(format!("start {start} exceeds stop {stop}"));
    }
    Ok(NodeRange((start..=stop).step_by(step).collect()))
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<kjnn_core::Error> for Failure {
    fn from(e: kjnn_core::Error) -> Self {
        match e {
            kjnn_core::Error::InvalidArgument(m) => Failure::Usage(m),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

/// Parses `argv` (including the program name) and runs it, writing reports
/// to `out` and diagnostics to `err`. Returns the process exit code.
pub fn cli_run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Runtime(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

pub fn cli_run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    cli_run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Failure::Usage(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(runtime)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Run(args) => run(args, out),
        Command::Draw(args) => draw(args, out),
        Command::Radius(args) => radius(args, out),
        Command::Gain(args) => gain(args, out),
    }
}

fn run(args: RunArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let t = &args.topology;
    let config = ExperimentConfig::new(t.topology.into(), t.k, t.j)
        .with_rule(t.prune.into())
        .with_n_values(args.n.0.clone())
        .with_trials(args.trials)
        .with_seed(args.seed)
        .with_radius(t.radius_mode());
    config.validate()?;
    let histogram_n = match (&args.histogram_out, args.histogram_n) {
        (_, Some(n)) if !config.n_values.contains(&n) => {
            return Err(Failure::Usage(format!("--histogram-n {n} is not in the sweep")));
        }
        (_, Some(n)) => n,
        (_, None) => *config.n_values.last().expect("validated non-empty"),
    };

    let results = thread_pool()?.install(|| run_experiment(&config))?;
    match args.format {
        Format::Csv => write_csv(&results, &args.out)?,
        Format::Json => write_json(&results, &args.out)?,
    }
    if let Some(path) = &args.histogram_out {
        let hist = &results
            .iter()
            .find(|a| a.n == histogram_n)
            .expect("histogram n is in the sweep")
            .degree_histogram;
        write_histogram_csv(hist, path)?;
    }
    writeln!(out, "wrote {} rows to {}", results.len(), args.out.display()).map_err(runtime)?;
    Ok(())
}

fn draw(args: DrawArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let t = &args.topology;
    let config = ExperimentConfig::new(t.topology.into(), t.k, t.j)
        .with_rule(t.prune.into())
        .with_n_values(vec![args.n])
        .with_trials(1)
        .with_seed(args.seed)
        .with_radius(t.radius_mode());
    config.validate()?;
    let cloud = sample_uniform_points(args.n, args.seed)?;
    let ranking = pairwise_rankings(&cloud);
    let graph = config.build(&cloud, &ranking)?;
    let options = RenderOptions {
        canvas: args.canvas,
        margin: args.margin,
        node_radius: args.node_radius,
        stroke_width: args.stroke_width,
        node_fill: args.node_fill.clone(),
        edge_stroke: args.edge_stroke.clone(),
    };
    let svg = render_svg(&cloud, &graph, &options)?;
    std::fs::write(&args.out, svg).map_err(runtime)?;
    writeln!(
        out,
        "wrote {} nodes and {} links to {}",
        graph.node_count(),
        graph.edge_count(),
        args.out.display()
    )
    .map_err(runtime)?;
    Ok(())
}

fn radius(args: RadiusArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let rows = args
        .n
        .0
        .iter()
        .map(|&n| critical_radius(n, args.k, args.sigma))
        .collect::<Result<Vec<_>, _>>()?;
    let mut text = String::from("n,k,sigma,xi,r_n\n");
    for p in rows {
        text.push_str(&format!("{},{},{},{:.6},{:.6}\n", p.n, p.k, p.sigma, p.xi, p.r_n));
    }
    out.write_all(text.as_bytes()).map_err(runtime)
}

fn gain(args: GainArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let base = read_results(&args.base)?;
    let reduced = read_results(&args.reduced)?;
    let by_n = |rows: Vec<AggregateResult>| -> BTreeMap<usize, AggregateResult> {
        rows.into_iter().map(|a| (a.n, a)).collect()
    };
    let (base, reduced) = (by_n(base), by_n(reduced));
    if base.is_empty() || base.keys().ne(reduced.keys()) {
        return Err(Failure::Usage("result files must cover the same node counts".into()));
    }
    let mut text = String::from("n,link_gain\n");
    let mut total = 0.0;
    for (n, b) in &base {
        let g = link_gain(b, &reduced[n])?;
        total += g;
        text.push_str(&format!("{n},{g:.6}\n"));
    }
    text.push_str(&format!("mean,{:.6}\n", total / base.len() as f64));
    out.write_all(text.as_bytes()).map_err(runtime)
}
