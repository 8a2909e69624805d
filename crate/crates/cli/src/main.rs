mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpdtsp::{Direction, DistanceKind, InitPolicy};

use commands::Failure;

/// Pickup-and-delivery TSP toolkit: instance generation, construction heuristics,
/// exact solving and corpus benchmarks.
#[derive(Debug, Parser)]
#[command(name = "mpdtsp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print point-cloud statistics of a TSPLIB file.
    Inspect { file: PathBuf },
    /// Build a pickup-and-delivery instance from a TSPLIB file.
    Generate(GenerateArgs),
    /// Run the construction heuristics on an instance.
    Solve(SolveArgs),
    /// Solve an instance to optimality (small instances only).
    Exact(ExactArgs),
    /// Check a tour file against an instance.
    Validate(ValidateArgs),
    /// Run the heuristics over a corpus of TSPLIB files.
    Bench(BenchArgs),
    /// Run both heuristics and, when small enough, the exact solver.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    PickupsCentral,
    DeliveriesCentral,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::PickupsCentral => Direction::PickupsCentral,
            DirectionArg::DeliveriesCentral => Direction::DeliveriesCentral,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Rounded,
    Exact,
}

impl From<MetricArg> for DistanceKind {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Rounded => DistanceKind::TsplibRounded,
            MetricArg::Exact => DistanceKind::ExactEuclidean,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HeuristicArg {
    Nnh,
    Cih,
    Both,
}

/// `all`, `depot` or a node id.
fn parse_init(s: &str) -> Result<InitPolicy, String> {
    match s {
        "all" => Ok(InitPolicy::AllNodes),
        "depot" => Ok(InitPolicy::DepotOnly),
        id => id.parse().map(InitPolicy::Single).map_err(|_| format!("expected `all`, `depot` or a node id, got {id:?}")),
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    direction: DirectionArg,
    /// Capacity in items.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    capacity: u32,
    #[arg(long, default_value_t = 1.0)]
    unit_load: f64,
    #[arg(long, value_enum, default_value = "exact")]
    metric: MetricArg,
    /// Instance output; `<out>.meta` receives the generation record. Printed when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    heuristic: HeuristicArg,
    #[arg(long, value_parser = parse_init, default_value = "all")]
    init: InitPolicy,
    /// Recompute costs under this metric instead of the one in the file.
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Per-start CSV table.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Tour file for the best tour found.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExactArgs {
    instance: PathBuf,
    #[arg(long, default_value_t = mpdtsp::exact::DEFAULT_MAX_PAIRS)]
    max_pairs: usize,
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    instance: PathBuf,
    tour: PathBuf,
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',')]
    directions: Vec<DirectionArg>,
    #[arg(long, value_delimiter = ',')]
    capacities: Vec<u32>,
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    #[arg(long, value_parser = parse_init)]
    init: Option<InitPolicy>,
    #[arg(long)]
    max_nodes: Option<usize>,
    /// Result CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cost ratio histogram SVG.
    #[arg(long)]
    histogram: Option<PathBuf>,
    /// Box plot SVG; the timing plot goes next to it with a `-time` suffix.
    #[arg(long)]
    boxplots: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Largest pair count handed to the exact solver.
    #[arg(long, default_value_t = mpdtsp::exact::DEFAULT_MAX_PAIRS)]
    max_pairs: usize,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("MPDTSP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("MPDTSP_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Invariant(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Inspect { file } => commands::inspect(&file),
        Command::Generate(a) => commands::generate(&a),
        Command::Solve(a) => commands::solve(&a),
        Command::Exact(a) => commands::exact(&a),
        Command::Validate(a) => commands::validate(&a),
        Command::Bench(a) => commands::bench(&a),
        Command::Compare(a) => commands::compare(&a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Infeasible(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
