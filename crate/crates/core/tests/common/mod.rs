#![allow(dead_code)]

use std::path::PathBuf;

use mpdtsp::model::{Instance, NodeId, Point};
use mpdtsp::DistanceKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/tsplib")
}

pub fn corpus_file(name: &str) -> PathBuf {
    corpus_dir().join(format!("{name}.tsp"))
}

pub fn points(coords: &[(f64, f64)]) -> Vec<Point<f64>> {
    coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
}

/// Depot at the origin, pickups at x=1 and x=2 on the axis, their deliveries one unit above.
pub fn fixture(capacity: f64) -> Instance<f64> {
    let pts = points(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 1.0), (2.0, 1.0)]);
    Instance::from_points("fixture", pts, &[1.0, 1.0], capacity, DistanceKind::ExactEuclidean).unwrap()
}

pub fn one_pair() -> Instance<f64> {
    let pts = points(&[(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)]);
    Instance::from_points("one", pts, &[1.0], 1.0, DistanceKind::ExactEuclidean).unwrap()
}

/// Uniform points in the unit square with unit loads. Rounded-metric instances scale the
/// square by 100 so that distances are not all zero or one.
pub fn random_instance(seed: u64, pairs: usize, capacity: f64, kind: DistanceKind) -> Instance<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = match kind {
        DistanceKind::ExactEuclidean => 1.0,
        DistanceKind::TsplibRounded => 100.0,
    };
    let pts = (0..2 * pairs + 1).map(|_| Point::new(rng.gen::<f64>() * scale, rng.gen::<f64>() * scale)).collect();
    Instance::from_points(format!("random-{seed}"), pts, &vec![1.0; pairs], capacity, kind).unwrap()
}

/// Independent feasibility check: walk the tour once with a running load.
pub fn reference_feasible(inst: &Instance<f64>, seq: &[NodeId]) -> bool {
    let n = inst.pairs();
    let total = 2 * n + 1;
    let seq: Vec<NodeId> = seq.iter().map(|&v| if v == total { 0 } else { v }).collect();
    if seq.len() != total + 1 || seq.first() != seq.last() || seq.iter().any(|&v| v >= total) {
        return false;
    }
    let body = &seq[..total];
    let mut seen = vec![false; total];
    for &v in body {
        if seen[v] {
            return false;
        }
        seen[v] = true;
    }
    let start = body[0];
    let pos = |v: NodeId| body.iter().position(|&u| u == v).unwrap();
    for k in 1..=n {
        let sanctioned = start == n + k;
        if !sanctioned && pos(k) > pos(n + k) {
            return false;
        }
    }
    let q = inst.capacity();
    let ok = |load: f64| load >= -1e-9 && load <= q + 1e-9;
    let mut load = if start >= 1 && start <= n { inst.load(start) } else { 0.0 };
    if !ok(load) {
        return false;
    }
    for &v in &body[1..] {
        load += inst.load(v);
        if !ok(load) {
            return false;
        }
    }
    if start > n {
        load += inst.load(start);
    }
    ok(load) && load.abs() <= 1e-9
}

/// Cheapest feasible depot-rooted tour by depth-first enumeration; `None` if none exists.
pub fn reference_optimum(inst: &Instance<f64>) -> Option<f64> {
    fn dfs(inst: &Instance<f64>, tour: &mut Vec<NodeId>, used: &mut [bool], load: f64, cost: f64, best: &mut Option<f64>) {
        let n = inst.pairs();
        let last = *tour.last().unwrap();
        if tour.len() == 2 * n + 1 {
            let total = cost + inst.cost(last, 0);
            if best.is_none_or(|b| total < b) {
                *best = Some(total);
            }
            return;
        }
        for v in 1..=2 * n {
            if used[v] || (v > n && !used[v - n]) {
                continue;
            }
            let next = load + inst.load(v);
            if next > inst.capacity() + 1e-9 {
                continue;
            }
            used[v] = true;
            tour.push(v);
            dfs(inst, tour, used, next, cost + inst.cost(last, v), best);
            tour.pop();
            used[v] = false;
        }
    }
    let mut best = None;
    let mut used = vec![false; inst.node_count()];
    used[0] = true;
    dfs(inst, &mut vec![0], &mut used, 0.0, 0.0, &mut best);
    best
}
