use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use mpdtsp::bench::{
    emit_csv, emit_svg_boxplots, emit_svg_histogram, run_corpus, summarize, BenchError, ExperimentConfig,
};
use mpdtsp::exact::{held_karp_with, ExactError, ExactOutcome, HeldKarpOptions};
use mpdtsp::format::{metric_label, parse_instance, parse_tour, write_instance, write_tour};
use mpdtsp::generate::{centroid, generate as build_instance, rank_by_centroid};
use mpdtsp::heuristic::{cih_best, nnh_best, MultiStartError};
use mpdtsp::model::{tour_cost, validate_sequence, NodeId};
use mpdtsp::tsplib::parse_file;
use mpdtsp::{GenerationSpec, InitPolicy, Instance, MultiStart};

use crate::{BenchArgs, CompareArgs, ExactArgs, GenerateArgs, HeuristicArg, MetricArg, SolveArgs, ValidateArgs};

/// Everything that ends a command early, grouped by exit status.
#[derive(Debug)]
pub enum Failure {
    /// No feasible tour exists or none was found (exit 1).
    Infeasible(String),
    /// Bad arguments or unreadable input (exit 2).
    Usage(String),
    /// A solver produced something the validator rejects (exit 3).
    Invariant(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Infeasible(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Infeasible(m) | Failure::Usage(m) | Failure::Invariant(m) => f.write_str(m),
        }
    }
}

fn usage(context: impl fmt::Display, e: impl fmt::Display) -> Failure {
    Failure::Usage(format!("{context}: {e}"))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(path.display(), e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(path.display(), e))
}

fn load_instance(path: &Path, metric: Option<MetricArg>) -> Result<Instance, Failure> {
    let instance: Instance = parse_instance(&read(path)?).map_err(|e| usage(path.display(), e))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let instance = instance.with_name(name);
    match metric {
        None => Ok(instance),
        Some(m) => instance.with_metric(m.into()).map_err(|e| usage(path.display(), e)),
    }
}

fn describe(instance: &Instance) -> String {
    format!(
        "{}: {} pairs, {} nodes, Q = {}, {} metric",
        instance.name(),
        instance.pairs(),
        instance.node_count(),
        instance.capacity(),
        metric_label(instance.metric())
    )
}

fn join(sequence: &[NodeId]) -> String {
    sequence.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn inspect(file: &Path) -> Result<(), Failure> {
    let cloud = parse_file::<f64>(file).map_err(|e| usage(file.display(), e))?;
    let c = centroid(&cloud).map_err(|e| usage(file.display(), e))?;
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &cloud.points {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let ranked = rank_by_centroid(&cloud);
    let m = cloud.len();
    println!("name: {}", cloud.name);
    println!("points: {m} (declared {})", cloud.declared_dimension);
    println!("bounds: x [{min_x}, {max_x}], y [{min_y}, {max_y}]");
    println!("centroid: ({:.6}, {:.6})", c.x, c.y);
    println!("centroid-nearest point: {}", cloud.points[ranked[0]].index);
    println!("pairs when generated: {}", m.saturating_sub(1) / 2);
    if m >= 3 && m % 2 == 0 {
        println!("dropped point: {}", cloud.points[ranked[m / 2]].index);
    }
    Ok(())
}

pub fn generate(args: &GenerateArgs) -> Result<(), Failure> {
    let cloud = parse_file::<f64>(&args.file).map_err(|e| usage(args.file.display(), e))?;
    let spec = GenerationSpec { direction: args.direction.into(), capacity_items: args.capacity, unit_load: args.unit_load };
    let generated = build_instance(&cloud, &spec).map_err(|e| usage(args.file.display(), e))?;
    let instance = generated
        .instance
        .with_metric(args.metric.into())
        .map_err(|e| Failure::Invariant(e.to_string()))?;
    let text = write_instance(&instance).map_err(|e| Failure::Invariant(e.to_string()))?;
    match &args.out {
        Some(out) => {
            write(out, &text)?;
            let mut meta = out.clone().into_os_string();
            meta.push(".meta");
            write(&PathBuf::from(meta), &generated.metadata.to_kv_string())?;
            println!("{}: {} pairs, Q = {}, written to {}", cloud.name, instance.pairs(), instance.capacity(), out.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn check_policy(instance: &Instance, policy: InitPolicy) -> Result<(), Failure> {
    match policy {
        InitPolicy::Single(id) if instance.physical(id).is_none() => Err(Failure::Usage(format!(
            "--init {id} is not a node of an instance with {} nodes",
            instance.node_count()
        ))),
        _ => Ok(()),
    }
}

type Run = Result<MultiStart, MultiStartError<f64>>;

fn run_heuristic(instance: &Instance, name: &str, inits: &[NodeId]) -> Result<Run, Failure> {
    let run = match name {
        "NNH" => nnh_best(instance, inits),
        _ => cih_best(instance, inits),
    };
    if let Err(MultiStartError::Invariant { init, report }) = &run {
        return Err(Failure::Invariant(format!("{name} from start {init} built an invalid tour: {report}")));
    }
    Ok(run)
}

pub fn solve(args: &SolveArgs) -> Result<(), Failure> {
    let instance = load_instance(&args.instance, args.metric)?;
    check_policy(&instance, args.init)?;
    let inits = args.init.inits(&instance);
    let names: &[&str] = match args.heuristic {
        HeuristicArg::Nnh => &["NNH"],
        HeuristicArg::Cih => &["CIH"],
        HeuristicArg::Both => &["NNH", "CIH"],
    };
    println!("{}", describe(&instance));

    let mut table = String::from("heuristic,init,cost,status\n");
    let mut best: Option<(&str, MultiStart)> = None;
    let mut failed = Vec::new();
    for &name in names {
        match run_heuristic(&instance, name, &inits)? {
            Ok(ms) => {
                println!(
                    "{name}: cost {} from start {} ({} of {} starts dead-ended)",
                    ms.best.cost,
                    ms.best_init,
                    ms.dead_ends(),
                    ms.table.len()
                );
                println!("  tour: {}", join(&ms.best.sequence));
                for o in &ms.table {
                    let (cost, status) = match &o.result {
                        Ok(c) => (c.to_string(), "ok"),
                        Err(_) => (String::new(), "dead-end"),
                    };
                    let _ = writeln!(table, "{name},{},{cost},{status}", o.init);
                }
                if best.as_ref().is_none_or(|(_, b)| ms.best.cost < b.best.cost) {
                    best = Some((name, ms));
                }
            }
            Err(MultiStartError::AllFailed(outcomes)) => {
                println!("{name}: no tour, every one of {} starts dead-ended", outcomes.len());
                for o in &outcomes {
                    let _ = writeln!(table, "{name},{},,dead-end", o.init);
                }
                failed.push(name);
            }
            Err(e) => return Err(Failure::Invariant(format!("{name}: {e}"))),
        }
    }
    if names.len() > 1 {
        if let Some((name, ms)) = &best {
            println!("best: {name} with cost {}", ms.best.cost);
        }
    }
    if let Some(path) = &args.table {
        write(path, &table)?;
    }
    if let (Some(path), Some((_, ms))) = (&args.out, &best) {
        write(path, &write_tour(&ms.best.sequence))?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Infeasible(format!("no feasible tour found by {}", failed.join(", "))))
    }
}

fn run_exact(instance: &Instance, max_pairs: usize) -> Result<ExactOutcome<f64>, Failure> {
    let options = HeldKarpOptions { max_pairs, ..Default::default() };
    held_karp_with(instance, options).map_err(|e| match e {
        ExactError::TooManyPairs { .. } => Failure::Usage(e.to_string()),
    })
}

pub fn exact(args: &ExactArgs) -> Result<(), Failure> {
    let instance = load_instance(&args.instance, args.metric)?;
    println!("{}", describe(&instance));
    match run_exact(&instance, args.max_pairs)? {
        ExactOutcome::Optimal(tour) => {
            println!("optimal cost {}", tour.cost);
            println!("  tour: {}", join(&tour.sequence));
            if let Some(path) = &args.out {
                write(path, &write_tour(&tour.sequence))?;
            }
            Ok(())
        }
        ExactOutcome::Infeasible => Err(Failure::Infeasible("infeasible: no depot-rooted tour satisfies the constraints".into())),
    }
}

pub fn validate(args: &ValidateArgs) -> Result<(), Failure> {
    let instance = load_instance(&args.instance, args.metric)?;
    let sequence = parse_tour(&read(&args.tour)?).map_err(|e| usage(args.tour.display(), e))?;
    let report = validate_sequence(&instance, &sequence);
    print!("{report}");
    if let Ok(cost) = tour_cost(&instance, &sequence) {
        println!("cost {cost}");
    }
    if report.feasible {
        Ok(())
    } else {
        Err(Failure::Infeasible(format!("{} is not a feasible tour", args.tour.display())))
    }
}

fn bench_failure(e: BenchError) -> Failure {
    match e {
        BenchError::Invariant { .. } => Failure::Invariant(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

pub fn bench(args: &BenchArgs) -> Result<(), Failure> {
    let mut config = match (&args.config, &args.corpus) {
        (Some(path), _) => {
            let base = path.parent().unwrap_or(Path::new("."));
            ExperimentConfig::from_kv(&read(path)?, base).map_err(|e| usage(path.display(), e))?
        }
        (None, Some(dir)) => ExperimentConfig::new(dir),
        (None, None) => return Err(Failure::Usage("bench needs --config or --corpus".into())),
    };
    if let (Some(_), Some(dir)) = (&args.config, &args.corpus) {
        config.corpus_dir = dir.clone();
    }
    if !args.directions.is_empty() {
        config.directions = args.directions.iter().map(|&d| d.into()).collect();
    }
    if !args.capacities.is_empty() {
        config.capacities = args.capacities.clone();
    }
    if let Some(m) = args.metric {
        config.metric = m.into();
    }
    if let Some(policy) = args.init {
        config.init_policy = policy;
    }
    if args.max_nodes.is_some() {
        config.max_nodes = args.max_nodes;
    }
    config.check().map_err(bench_failure)?;
    info!("bench config: {config:?}");

    let run = run_corpus(&config).map_err(bench_failure)?;
    for s in &run.skipped {
        println!("skipped {}: {}", s.path.display(), s.reason);
    }
    if let Some(path) = &args.out {
        emit_csv(&run.rows, path).map_err(bench_failure)?;
    }
    let summary = summarize(&run.rows).map_err(bench_failure)?;
    println!("{} rows", run.rows.len());
    for d in &summary.per_direction {
        println!(
            "{}: NNH <= CIH in {}/{} ({:.1}%), max reduction {:.1}%",
            d.direction,
            d.tally.nnh_wins,
            d.tally.pairs,
            100.0 * d.tally.fraction(),
            100.0 * d.max_reduction
        );
    }
    println!(
        "overall: NNH <= CIH in {}/{} ({:.1}%), {} runs without a tour",
        summary.overall.nnh_wins,
        summary.overall.pairs,
        100.0 * summary.overall.fraction(),
        summary.incomplete_pairs
    );
    for (q, quart) in &summary.cost_ratio_by_capacity {
        println!("Q={q}: CIH/NNH cost ratio median {:.4} [{:.4}, {:.4}]", quart.median, quart.min, quart.max);
    }
    if let Some(path) = &args.histogram {
        emit_svg_histogram(&summary, path).map_err(bench_failure)?;
    }
    if let Some(path) = &args.boxplots {
        emit_svg_boxplots(&summary, path).map_err(bench_failure)?;
    }
    Ok(())
}

pub fn compare(args: &CompareArgs) -> Result<(), Failure> {
    let instance = load_instance(&args.instance, args.metric)?;
    println!("{}", describe(&instance));
    let optimum = if instance.pairs() <= args.max_pairs {
        match run_exact(&instance, args.max_pairs)? {
            ExactOutcome::Optimal(t) => Some(t.cost),
            ExactOutcome::Infeasible => return Err(Failure::Infeasible("infeasible: no depot-rooted tour exists".into())),
        }
    } else {
        println!("exact solver skipped: {} pairs > --max-pairs {}", instance.pairs(), args.max_pairs);
        None
    };

    let mut results = Vec::new();
    for (label, policy) in [("all starts", InitPolicy::AllNodes), ("depot start", InitPolicy::DepotOnly)] {
        let inits = policy.inits(&instance);
        for name in ["NNH", "CIH"] {
            let cost = run_heuristic(&instance, name, &inits)?.ok().map(|ms| ms.best.cost);
            results.push((format!("{name} ({label})"), cost));
        }
    }
    let reference = optimum.or_else(|| results.iter().filter_map(|r| r.1).reduce(f64::min));
    let against = if optimum.is_some() { "optimum" } else { "best heuristic" };
    if let Some(opt) = optimum {
        println!("{:<22} {opt}", "optimum");
    }
    for (label, cost) in &results {
        match (cost, reference) {
            (Some(c), Some(r)) if r > 0.0 => println!("{label:<22} {c}  gap {:+.2}% vs {against}", 100.0 * (c - r) / r),
            (Some(c), _) => println!("{label:<22} {c}"),
            (None, _) => println!("{label:<22} no tour (dead end)"),
        }
    }
    Ok(())
}
