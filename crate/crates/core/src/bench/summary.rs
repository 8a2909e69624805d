use std::collections::BTreeMap;

use crate::generate::Direction;

use super::{BenchError, Heuristic, ResultRow};

/// Fixed-width histogram; bucket `k` covers `[k * width, (k + 1) * width)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub width: f64,
    pub buckets: BTreeMap<i64, usize>,
}

impl Histogram {
    pub fn from_values(values: &[f64], width: f64) -> Self {
        let mut buckets = BTreeMap::new();
        for &v in values {
            // nudge so values sitting on an edge land in the upper bucket despite rounding
            let k = (v / width + 1e-9).floor() as i64;
            *buckets.entry(k).or_insert(0) += 1;
        }
        Histogram { width, buckets }
    }

    pub fn total(&self) -> usize {
        self.buckets.values().sum()
    }

    pub fn lower_edge(&self, bucket: i64) -> f64 {
        bucket as f64 * self.width
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quartiles {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub count: usize,
}

/// Quartiles with linear interpolation between order statistics. `None` for no data.
pub fn quartiles(values: &[f64]) -> Option<Quartiles> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let at = |p: f64| {
        let h = p * (v.len() - 1) as f64;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        v[lo] + (h - lo as f64) * (v[hi] - v[lo])
    };
    Some(Quartiles { min: v[0], q1: at(0.25), median: at(0.5), q3: at(0.75), max: v[v.len() - 1], count: v.len() })
}

/// How often nearest neighbor was at least as good as cheapest insertion.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WinTally {
    pub pairs: usize,
    /// Pairs with NNH cost <= CIH cost; ties count for NNH.
    pub nnh_wins: usize,
}

impl WinTally {
    pub fn fraction(&self) -> f64 {
        if self.pairs == 0 {
            f64::NAN
        } else {
            self.nnh_wins as f64 / self.pairs as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSummary {
    pub direction: Direction,
    pub tally: WinTally,
    /// Histogram of CIH cost / NNH cost.
    pub ratio_histogram: Histogram,
    /// Largest `(CIH - NNH) / CIH`.
    pub max_reduction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub per_direction: Vec<DirectionSummary>,
    pub overall: WinTally,
    /// CIH / NNH cost ratio by capacity.
    pub cost_ratio_by_capacity: BTreeMap<u32, Quartiles>,
    /// CIH / NNH wall time ratio by node count.
    pub time_ratio_by_nodes: BTreeMap<usize, Quartiles>,
    pub max_reduction: Option<f64>,
    /// Pairs left out because a heuristic found no tour.
    pub incomplete_pairs: usize,
}

pub const RATIO_BUCKET_WIDTH: f64 = 0.02;

fn to_quartiles<K: Ord>(m: BTreeMap<K, Vec<f64>>) -> BTreeMap<K, Quartiles> {
    m.into_iter().filter_map(|(k, v)| quartiles(&v).map(|q| (k, q))).collect()
}

struct Pair {
    direction: Direction,
    capacity: u32,
    node_count: usize,
    nnh: (f64, f64),
    cih: (f64, f64),
}

/// Pairs NNH and CIH rows by (instance, direction, Q) and aggregates them. The result does
/// not depend on row order.
pub fn summarize(rows: &[ResultRow]) -> Result<Summary, BenchError> {
    type Key<'a> = (&'a str, Direction, u32);
    let mut grouped: BTreeMap<Key, (Option<&ResultRow>, Option<&ResultRow>)> = BTreeMap::new();
    for r in rows {
        let slot = grouped.entry((r.instance.as_str(), r.direction, r.capacity)).or_default();
        let place = match r.heuristic {
            Heuristic::Nnh => &mut slot.0,
            Heuristic::Cih => &mut slot.1,
        };
        if place.is_some() {
            return Err(BenchError::Config(format!(
                "duplicate {} row for {} ({}, Q={})",
                r.heuristic, r.instance, r.direction, r.capacity
            )));
        }
        *place = Some(r);
    }

    let mut pairs = Vec::new();
    let mut incomplete = 0;
    for ((instance, direction, capacity), (nnh, cih)) in grouped {
        let unpaired = |missing| BenchError::Unpaired { instance: instance.to_string(), direction, capacity, missing };
        let nnh = nnh.ok_or_else(|| unpaired(Heuristic::Nnh))?;
        let cih = cih.ok_or_else(|| unpaired(Heuristic::Cih))?;
        match (nnh.best_cost, cih.best_cost) {
            (Some(a), Some(b)) => pairs.push(Pair {
                direction,
                capacity,
                node_count: nnh.node_count,
                nnh: (a, nnh.wall_time),
                cih: (b, cih.wall_time),
            }),
            _ => incomplete += 1,
        }
    }

    let nnh_wins = |p: &Pair| p.nnh.0 <= p.cih.0 + 1e-9;
    let reduction = |p: &Pair| if p.cih.0 > 0.0 { (p.cih.0 - p.nnh.0) / p.cih.0 } else { 0.0 };
    let ratio = |p: &Pair| if p.nnh.0 > 0.0 { p.cih.0 / p.nnh.0 } else { 1.0 };

    let mut per_direction = Vec::new();
    for direction in Direction::ALL {
        let subset: Vec<&Pair> = pairs.iter().filter(|p| p.direction == direction).collect();
        if subset.is_empty() {
            continue;
        }
        let ratios: Vec<f64> = subset.iter().map(|p| ratio(p)).collect();
        per_direction.push(DirectionSummary {
            direction,
            tally: WinTally { pairs: subset.len(), nnh_wins: subset.iter().filter(|p| nnh_wins(p)).count() },
            ratio_histogram: Histogram::from_values(&ratios, RATIO_BUCKET_WIDTH),
            max_reduction: subset.iter().map(|p| reduction(p)).fold(f64::NEG_INFINITY, f64::max),
        });
    }

    let mut by_capacity: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    let mut by_nodes: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for p in &pairs {
        by_capacity.entry(p.capacity).or_default().push(ratio(p));
        by_nodes.entry(p.node_count).or_default().push(p.cih.1 / p.nnh.1.max(1e-9));
    }

    Ok(Summary {
        per_direction,
        overall: WinTally { pairs: pairs.len(), nnh_wins: pairs.iter().filter(|p| nnh_wins(p)).count() },
        cost_ratio_by_capacity: to_quartiles(by_capacity),
        time_ratio_by_nodes: to_quartiles(by_nodes),
        max_reduction: pairs.iter().map(reduction).reduce(f64::max),
        incomplete_pairs: incomplete,
    })
}
