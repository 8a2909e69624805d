//! Corpus experiments: every TSPLIB file × precedence direction × capacity, solved with
//! both multi-start heuristics.

mod config;
mod csv;
mod summary;
mod svg;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use log::warn;
use thiserror::Error;

use crate::generate::{generate, Direction, GenerationSpec};
use crate::heuristic::{cih_best, nnh_best, InitPolicy, MultiStartError};
use crate::model::{validate_sequence, Instance, NodeId};
use crate::tsplib::{parse_file, DistanceKind, PointCloud};

pub use config::ExperimentConfig;
pub use csv::{emit_csv, to_csv_string, CSV_HEADER};
pub use summary::{quartiles, summarize, DirectionSummary, Histogram, Quartiles, Summary, WinTally};
pub use svg::{box_plot_svg, emit_svg_boxplots, emit_svg_histogram, histogram_svg};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no instances: {0} contains no parsable EUC_2D file")]
    NoInstances(PathBuf),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{instance} ({direction}, Q={capacity}) {heuristic}: invalid tour: {detail}")]
    Invariant { instance: String, direction: Direction, capacity: u32, heuristic: Heuristic, detail: String },
    #[error("{instance}: {message}")]
    Generate { instance: String, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error("row for {instance} ({direction}, Q={capacity}) has no {missing} partner")]
    Unpaired { instance: String, direction: Direction, capacity: u32, missing: Heuristic },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heuristic {
    Nnh,
    Cih,
}

impl Heuristic {
    pub fn as_str(self) -> &'static str {
        match self {
            Heuristic::Nnh => "NNH",
            Heuristic::Cih => "CIH",
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nnh" => Ok(Heuristic::Nnh),
            "cih" => Ok(Heuristic::Cih),
            other => Err(format!("unknown heuristic {other:?}")),
        }
    }
}

/// One (instance, direction, Q, heuristic) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub instance: String,
    pub direction: Direction,
    pub capacity: u32,
    pub heuristic: Heuristic,
    /// `None` when every start dead-ended.
    pub best_cost: Option<f64>,
    pub wall_time: f64,
    pub node_count: usize,
    pub init_of_best: Option<NodeId>,
    pub dead_end_count: usize,
    /// Best tour, kept for re-validation; not written to CSV.
    pub tour: Option<Vec<NodeId>>,
}

impl ResultRow {
    fn order_key(&self) -> (&str, Direction, u32, Heuristic) {
        (&self.instance, self.direction, self.capacity, self.heuristic)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusRun {
    pub rows: Vec<ResultRow>,
    pub skipped: Vec<SkippedFile>,
}

/// `.tsp` files in `dir`, sorted by file name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let io = |source| BenchError::Io { path: dir.to_path_buf(), source };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("tsp")) {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// Runs the full sweep. Unparsable or oversized files are skipped with a warning;
/// an invalid heuristic tour aborts the run.
pub fn run_corpus(config: &ExperimentConfig) -> Result<CorpusRun, BenchError> {
    config.check()?;
    let mut run = CorpusRun::default();
    let mut clouds = Vec::new();
    for path in corpus_files(&config.corpus_dir)? {
        match parse_file::<f64>(&path) {
            Ok(cloud) if config.max_nodes.is_some_and(|m| cloud.len() > m) => {
                let reason = format!("{} points exceeds max_nodes", cloud.len());
                run.skipped.push(SkippedFile { path, reason });
            }
            Ok(cloud) => {
                let name = path.file_stem().map_or_else(|| cloud.name.clone(), |s| s.to_string_lossy().into_owned());
                clouds.push((name, cloud));
            }
            Err(e) => {
                warn!("skipping {}: {e}", path.display());
                run.skipped.push(SkippedFile { path, reason: e.to_string() });
            }
        }
    }
    if clouds.is_empty() {
        return Err(BenchError::NoInstances(config.corpus_dir.clone()));
    }
    for (name, cloud) in &clouds {
        run.rows.extend(run_cloud(name, cloud, config)?);
    }
    run.rows.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    Ok(run)
}

/// All direction × capacity × heuristic rows for one point cloud.
pub fn run_cloud(name: &str, cloud: &PointCloud<f64>, config: &ExperimentConfig) -> Result<Vec<ResultRow>, BenchError> {
    let mut rows = Vec::new();
    let mut directions = config.directions.clone();
    directions.sort();
    directions.dedup();
    for &direction in &directions {
        for &capacity in &config.capacities {
            let spec = GenerationSpec::new(direction, capacity);
            let generated = generate(cloud, &spec)
                .map_err(|e| BenchError::Generate { instance: name.to_string(), message: e.to_string() })?;
            let instance = match config.metric {
                DistanceKind::ExactEuclidean => generated.instance,
                kind => generated
                    .instance
                    .with_metric(kind)
                    .map_err(|e| BenchError::Generate { instance: name.to_string(), message: e.to_string() })?,
            };
            for heuristic in [Heuristic::Nnh, Heuristic::Cih] {
                rows.push(solve_row(name, &instance, direction, capacity, heuristic, config.init_policy)?);
            }
        }
    }
    Ok(rows)
}

fn solve_row(
    name: &str,
    instance: &Instance<f64>,
    direction: Direction,
    capacity: u32,
    heuristic: Heuristic,
    policy: InitPolicy,
) -> Result<ResultRow, BenchError> {
    let inits = policy.inits(instance);
    let started = Instant::now();
    let outcome = match heuristic {
        Heuristic::Nnh => nnh_best(instance, &inits),
        Heuristic::Cih => cih_best(instance, &inits),
    };
    let wall_time = started.elapsed().as_secs_f64();
    let invariant = |detail: String| BenchError::Invariant {
        instance: name.to_string(),
        direction,
        capacity,
        heuristic,
        detail,
    };
    let mut row = ResultRow {
        instance: name.to_string(),
        direction,
        capacity,
        heuristic,
        best_cost: None,
        wall_time,
        node_count: instance.node_count(),
        init_of_best: None,
        dead_end_count: 0,
        tour: None,
    };
    match outcome {
        Ok(ms) => {
            let report = validate_sequence(instance, &ms.best.sequence);
            if !report.feasible {
                return Err(invariant(report.to_string()));
            }
            row.dead_end_count = ms.dead_ends();
            row.best_cost = Some(ms.best.cost);
            row.init_of_best = Some(ms.best_init);
            row.tour = Some(ms.best.sequence);
        }
        Err(MultiStartError::AllFailed(table)) => {
            warn!("{name} ({direction}, Q={capacity}) {heuristic}: every start dead-ended");
            row.dead_end_count = table.len();
        }
        Err(e) => return Err(invariant(e.to_string())),
    }
    Ok(row)
}
