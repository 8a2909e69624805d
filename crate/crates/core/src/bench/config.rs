use std::path::{Path, PathBuf};

use crate::format::{parse_kv, parse_metric_token};
use crate::generate::Direction;
use crate::heuristic::InitPolicy;
use crate::tsplib::DistanceKind;

use super::BenchError;

/// Sweep parameters. Every step of a run is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub corpus_dir: PathBuf,
    pub directions: Vec<Direction>,
    pub capacities: Vec<u32>,
    pub metric: DistanceKind,
    pub init_policy: InitPolicy,
    /// Files with more points are skipped.
    pub max_nodes: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(corpus_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            corpus_dir: corpus_dir.into(),
            directions: Direction::ALL.to_vec(),
            capacities: vec![2, 4, 6, 8, 10],
            metric: DistanceKind::ExactEuclidean,
            init_policy: InitPolicy::AllNodes,
            max_nodes: None,
        }
    }

    pub fn check(&self) -> Result<(), BenchError> {
        if self.capacities.is_empty() || self.capacities.contains(&0) {
            return Err(BenchError::Config("capacities must be a nonempty list of positive integers".into()));
        }
        if self.directions.is_empty() {
            return Err(BenchError::Config("at least one direction is required".into()));
        }
        if matches!(self.init_policy, InitPolicy::Single(_)) {
            return Err(BenchError::Config("init_policy must be `all` or `depot`".into()));
        }
        Ok(())
    }

    /// Reads a `key = value` file. Relative `corpus_dir` values resolve against `base`.
    ///
    /// Keys: `corpus_dir`, `directions`, `capacities`, `metric` (`exact`/`rounded`),
    /// `init_policy` (`all`/`depot`), `max_nodes`.
    pub fn from_kv(text: &str, base: &Path) -> Result<Self, BenchError> {
        let config_err = |m: String| BenchError::Config(m);
        let mut config = ExperimentConfig::new(base);
        let mut saw_corpus = false;
        for (key, value) in parse_kv(text).map_err(|e| config_err(e.to_string()))? {
            match key.as_str() {
                "corpus_dir" => {
                    config.corpus_dir = base.join(&value);
                    saw_corpus = true;
                }
                "directions" => {
                    config.directions = split_list(&value)
                        .map(|d| d.parse::<Direction>())
                        .collect::<Result<_, _>>()
                        .map_err(config_err)?;
                }
                "capacities" => {
                    config.capacities = split_list(&value)
                        .map(|c| c.parse::<u32>().map_err(|_| format!("bad capacity {c:?}")))
                        .collect::<Result<_, _>>()
                        .map_err(config_err)?;
                }
                "metric" => {
                    config.metric =
                        parse_metric_token(&value).ok_or_else(|| config_err(format!("unknown metric {value:?}")))?;
                }
                "init_policy" => {
                    config.init_policy = match value.to_ascii_lowercase().as_str() {
                        "all" => InitPolicy::AllNodes,
                        "depot" => InitPolicy::DepotOnly,
                        other => return Err(config_err(format!("unknown init_policy {other:?}"))),
                    };
                }
                "max_nodes" => {
                    config.max_nodes = match value.as_str() {
                        "" | "none" => None,
                        v => Some(v.parse().map_err(|_| config_err(format!("bad max_nodes {v:?}")))?),
                    };
                }
                other => return Err(config_err(format!("unknown key {other:?}"))),
            }
        }
        if !saw_corpus {
            return Err(config_err("missing corpus_dir".into()));
        }
        config.check()?;
        Ok(config)
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty())
}
