//! The `csa` command line: capacity bound evaluation, threshold search,
//! EXIT-chart sampling, distribution optimization and PLR simulation.
//!
//! Machine-readable output (JSON or CSV) goes to `--out` or standard output;
//! diagnostics go to standard error. Every subcommand is deterministic given
//! its full flag set including `--seed`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bound::{bound_curve, solve_bound, BoundPoint};
use crate::density::{find_threshold, DEFAULT_MAX_ITERS, DEFAULT_PRECISION, DEFAULT_Q_TARGET};
use crate::exit::sample_exit_chart;
use crate::io;
use crate::optimize::{optimize_distribution, preset, OptimizationProblem, OptimizeFamily, PRESET_NAMES};
use crate::simulate::{run_plr, sweep_plr, StopRule};
use crate::exit::CodeDistribution;
use crate::{Error, Result};

/// Default master seed; fixed so that repeated invocations reproduce the
/// same output byte for byte.
pub const DEFAULT_SEED: u64 = 0xC5A5EED;

#[derive(Parser)]
#[command(name = "csa", version, about = "Coded slotted ALOHA analysis and simulation")]
pub struct Cli {
    /// Worker threads for parallel sections (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evaluate the capacity bound Ḡ(R), pointwise or as a curve.
    Bound(BoundArgs),
    /// Locate the density-evolution threshold G* of a distribution.
    Threshold(ThresholdArgs),
    /// Sample the EXIT chart (f_b and f_s⁻¹) at one traffic value.
    ExitChart(ExitChartArgs),
    /// Search for a distribution maximizing G* at a target rate.
    Optimize(OptimizeArgs),
    /// Monte Carlo packet-loss-rate simulation over a traffic grid.
    Simulate(SimulateArgs),
    /// List the built-in preset distributions.
    Presets,
}

/// Where a distribution comes from: a named preset or a JSON file.
#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct DistSource {
    /// Preset name (see `csa presets`).
    #[arg(long)]
    pub preset: Option<String>,
    /// Path to a distribution JSON file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl DistSource {
    fn load(&self) -> Result<CodeDistribution> {
        match (&self.preset, &self.file) {
            (Some(name), None) => preset(name),
            (None, Some(path)) => io::read_distribution(&fs::read_to_string(path)?),
            _ => Err(Error::InvalidArgument(
                "exactly one of --preset and --file is required".into(),
            )),
        }
    }
}

#[derive(Args)]
pub struct BoundArgs {
    /// Single rate to evaluate (JSON output by default).
    #[arg(long, conflicts_with = "curve")]
    pub rate: Option<f64>,
    /// Emit a rate grid instead (CSV output by default).
    #[arg(long)]
    pub curve: bool,
    #[arg(long, default_value_t = 0.05)]
    pub rmin: f64,
    #[arg(long, default_value_t = 0.95)]
    pub rmax: f64,
    #[arg(long, default_value_t = 19)]
    pub steps: usize,
    /// Force JSON output.
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Force CSV output.
    #[arg(long)]
    pub csv: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub source: DistSource,
    /// Final bisection bracket width.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision: f64,
    /// Residual at which density evolution counts as converged.
    #[arg(long, default_value_t = DEFAULT_Q_TARGET)]
    pub q_target: f64,
    /// Iteration cap per density-evolution run.
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ExitChartArgs {
    #[command(flatten)]
    pub source: DistSource,
    /// Offered traffic.
    #[arg(long)]
    pub g: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Rep,
    Mds,
}

#[derive(Args)]
pub struct OptimizeArgs {
    /// Code dimension.
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Candidate lengths, as an inclusive range "2..10" or a list "2,3,9".
    #[arg(long)]
    pub lengths: String,
    /// Target overall rate R = k / n̄.
    #[arg(long)]
    pub rate: f64,
    /// Population size (0 = ten per dimension).
    #[arg(long, default_value_t = 0)]
    pub pop: usize,
    #[arg(long, default_value_t = 200)]
    pub gens: usize,
    /// DE mutation weight F.
    #[arg(long, default_value_t = 0.8)]
    pub mutation_weight: f64,
    /// DE crossover rate CR.
    #[arg(long, default_value_t = 0.9)]
    pub crossover_rate: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Report JSON destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the champion distribution alone, loadable via --file.
    #[arg(long)]
    pub dist_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: DistSource,
    /// Frame size in slots.
    #[arg(long)]
    pub slots: usize,
    /// Single offered-traffic point.
    #[arg(long, conflicts_with_all = ["gmin", "gmax", "gstep"])]
    pub g: Option<f64>,
    #[arg(long, requires = "gmax", requires = "gstep")]
    pub gmin: Option<f64>,
    #[arg(long)]
    pub gmax: Option<f64>,
    #[arg(long)]
    pub gstep: Option<f64>,
    /// Frame budget per grid point.
    #[arg(long, default_value_t = 100_000)]
    pub frames: u64,
    /// Stop a grid point after this many lost bursts.
    #[arg(long, default_value_t = 200)]
    pub errors: u64,
    /// SIC iteration cap per frame.
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses "2..10" (inclusive) or "2,3,9".
pub fn parse_lengths(spec: &str) -> Result<Vec<usize>> {
    let bad = |why: &str| Error::InvalidArgument(format!("bad length spec '{spec}': {why}"));
    if let Some((a, b)) = spec.split_once("..") {
        let lo: usize = a.trim().parse().map_err(|_| bad("range start"))?;
        let hi: usize = b.trim().parse().map_err(|_| bad("range end"))?;
        if lo > hi {
            return Err(bad("empty range"));
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',')
        .map(|part| part.trim().parse().map_err(|_| bad("list entry")))
        .collect()
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_bound(args: &BoundArgs) -> Result<()> {
    if args.curve {
        let points = bound_curve(args.rmin, args.rmax, args.steps)?;
        let content = if args.json {
            let rows: Vec<serde_json::Value> = points
                .iter()
                .map(|p| serde_json::json!({"rate": p.rate, "g_bar": p.g_bar}))
                .collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        } else {
            let mut buf = Vec::new();
            io::write_bound_csv(&mut buf, &points)?;
            String::from_utf8(buf).expect("csv is utf-8")
        };
        return write_output(&args.out, &content);
    }
    let rate = args
        .rate
        .ok_or_else(|| Error::InvalidArgument("need --rate or --curve".into()))?;
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rate must lie in (0, 1], got {rate}"
        )));
    }
    let g_bar = solve_bound(rate)?;
    if rate >= 1.0 {
        eprintln!("note: rate >= 1 has the degenerate bound 0");
    }
    let content = if args.csv {
        let mut buf = Vec::new();
        io::write_bound_csv(&mut buf, &[BoundPoint { rate, g_bar }])?;
        String::from_utf8(buf).expect("csv is utf-8")
    } else {
        serde_json::to_string_pretty(&serde_json::json!({"rate": rate, "g_bar": g_bar}))? + "\n"
    };
    write_output(&args.out, &content)
}

fn cmd_threshold(args: &ThresholdArgs) -> Result<()> {
    let dist = args.source.load()?;
    let result = find_threshold(&dist, args.precision, args.q_target, args.max_iters);
    if result.degenerate {
        eprintln!("note: distribution contains a rate-1 code; the threshold collapses to 0");
    }
    let json = io::threshold_to_json(&result, dist.rate());
    write_output(&args.out, &(serde_json::to_string_pretty(&json)? + "\n"))
}

fn cmd_exit_chart(args: &ExitChartArgs) -> Result<()> {
    let dist = args.source.load()?;
    let samples = sample_exit_chart(&dist, args.g, args.samples)?;
    let mut buf = Vec::new();
    io::write_exit_chart_csv(&mut buf, &samples)?;
    write_output(&args.out, &String::from_utf8(buf).expect("csv is utf-8"))
}

fn cmd_optimize(args: &OptimizeArgs) -> Result<()> {
    let lengths = parse_lengths(&args.lengths)?;
    let family = match args.family {
        FamilyArg::Rep => OptimizeFamily::Repetition,
        FamilyArg::Mds => OptimizeFamily::MdsAnalytic,
    };
    let mut problem = OptimizationProblem::new(args.k, family, lengths, args.rate, args.seed);
    if args.pop > 0 {
        problem.population_size = args.pop;
    }
    problem.generations = args.gens;
    problem.mutation_weight = args.mutation_weight;
    problem.crossover_rate = args.crossover_rate;
    let result = optimize_distribution(&problem)?;
    eprintln!(
        "champion threshold {:.4} at rate {:.4}",
        result.g_star,
        result.distribution.rate()
    );
    if let Some(path) = &args.dist_out {
        fs::write(path, io::write_distribution(&result.distribution)? + "\n")?;
    }
    let report = io::optimize_report(&problem, &result);
    write_output(&args.out, &(serde_json::to_string_pretty(&report)? + "\n"))
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let dist = args.source.load()?;
    let stop = StopRule {
        max_frames: args.frames,
        target_errors: args.errors,
    };
    let reports = match (args.g, args.gmin, args.gmax, args.gstep) {
        (Some(g), None, None, None) => {
            vec![run_plr(&dist, args.slots, g, stop, args.max_iter, args.seed)?]
        }
        (None, Some(gmin), Some(gmax), Some(gstep)) => sweep_plr(
            &dist, args.slots, gmin, gmax, gstep, stop, args.max_iter, args.seed,
        )?,
        _ => {
            return Err(Error::InvalidArgument(
                "need --g or the full --gmin/--gmax/--gstep grid".into(),
            ))
        }
    };
    let mut buf = Vec::new();
    io::write_plr_csv(&mut buf, &reports)?;
    write_output(&args.out, &String::from_utf8(buf).expect("csv is utf-8"))
}

fn cmd_presets() -> Result<()> {
    println!("name     k  rate      mean_length  entries");
    for name in PRESET_NAMES {
        let dist = preset(name)?;
        println!(
            "{:<8} {:<2} {:<9.6} {:<12.6} {}",
            name,
            dist.k(),
            dist.rate(),
            dist.mean_length(),
            dist.entries().len()
        );
    }
    println!("(repN and spcK are accepted for any feasible N, K)");
    Ok(())
}

/// Entry point used by the binary; parses arguments, configures the worker
/// pool and dispatches.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers > 0 {
        // A pool that was already initialized (e.g. in tests) keeps its size.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    let outcome = match &cli.command {
        Command::Bound(args) => cmd_bound(args),
        Command::Threshold(args) => cmd_threshold(args),
        Command::ExitChart(args) => cmd_exit_chart(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Presets => cmd_presets(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
