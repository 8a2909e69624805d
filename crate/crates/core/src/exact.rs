//! Exact depot-rooted solvers for small instances.
//!
//! [`held_karp`] is a dynamic program over precedence-closed visit sets. Each item is in
//! one of three states (not picked, aboard, delivered), so a set is a base-3 number and
//! the load of a set is the sum of the items aboard. [`brute_force`] enumerates every
//! permutation and filters with the validator; it exists as an independent check.

use itertools::Itertools;
use thiserror::Error;

use crate::model::{validate_sequence, Instance, NodeId, Tour};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_PAIRS: usize = 10;
pub const BRUTE_FORCE_MAX_PAIRS: usize = 4;
/// Above this the state table no longer fits comfortably in memory.
pub const HARD_MAX_PAIRS: usize = 13;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("instance has {pairs} pairs; the exact solver is limited to {limit}")]
    TooManyPairs { pairs: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExactOutcome<S> {
    Optimal(Tour<S>),
    Infeasible,
}

impl<S: Scalar> ExactOutcome<S> {
    pub fn tour(&self) -> Option<&Tour<S>> {
        match self {
            ExactOutcome::Optimal(t) => Some(t),
            ExactOutcome::Infeasible => None,
        }
    }

    pub fn cost(&self) -> Option<S> {
        self.tour().map(|t| t.cost)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeldKarpOptions {
    pub max_pairs: usize,
    /// When false only precedence is enforced.
    pub enforce_capacity: bool,
}

impl Default for HeldKarpOptions {
    fn default() -> Self {
        HeldKarpOptions { max_pairs: DEFAULT_MAX_PAIRS, enforce_capacity: true }
    }
}

pub fn held_karp<S: Scalar>(instance: &Instance<S>) -> Result<ExactOutcome<S>, ExactError> {
    held_karp_with(instance, HeldKarpOptions::default())
}

const NO_PARENT: u8 = u8::MAX;

pub fn held_karp_with<S: Scalar>(instance: &Instance<S>, options: HeldKarpOptions) -> Result<ExactOutcome<S>, ExactError> {
    let n = instance.pairs();
    let limit = options.max_pairs.min(HARD_MAX_PAIRS);
    if n > limit {
        return Err(ExactError::TooManyPairs { pairs: n, limit });
    }
    if n == 0 {
        return Ok(ExactOutcome::Optimal(Tour { sequence: vec![0, 0], cost: S::zero() }));
    }
    let capacity = instance.capacity();
    let fits = |load: S| !options.enforce_capacity || load.le_tol(capacity);

    let pow3: Vec<usize> = (0..n).scan(1usize, |acc, _| {
        let v = *acc;
        *acc *= 3;
        Some(v)
    })
    .collect();
    let states = pow3[n - 1] * 3;
    let width = 2 * n;
    // node v in 1..=2n is column v - 1; item k (0-based) has pickup k + 1, delivery n + k + 1
    let mut best = vec![S::infinity(); states * width];
    let mut parent = vec![NO_PARENT; states * width];

    for k in 0..n {
        let pickup = k + 1;
        if fits(instance.load(pickup)) {
            best[pow3[k] * width + k] = instance.cost(0, pickup);
        }
    }

    let mut digits = vec![0u8; n];
    for state in 0..states {
        let mut rest = state;
        let mut load = S::zero();
        for k in 0..n {
            digits[k] = (rest % 3) as u8;
            rest /= 3;
            if digits[k] == 1 {
                load += instance.load(k + 1);
            }
        }
        for col in 0..width {
            let here = best[state * width + col];
            if !here.is_finite() {
                continue;
            }
            let last = col + 1;
            for k in 0..n {
                let next = match digits[k] {
                    0 if fits(load + instance.load(k + 1)) => k + 1,
                    1 => n + k + 1,
                    _ => continue,
                };
                let target = (state + pow3[k]) * width + (next - 1);
                let cand = here + instance.cost(last, next);
                if cand < best[target] {
                    best[target] = cand;
                    parent[target] = col as u8;
                }
            }
        }
    }

    let full: usize = pow3.iter().map(|p| 2 * p).sum();
    let mut answer: Option<(S, usize)> = None;
    for col in 0..width {
        let c = best[full * width + col];
        if c.is_finite() {
            let total = c + instance.cost(col + 1, 0);
            if answer.is_none_or(|(b, _)| total < b) {
                answer = Some((total, col));
            }
        }
    }
    let Some((cost, mut col)) = answer else {
        return Ok(ExactOutcome::Infeasible);
    };

    let mut state = full;
    let mut reversed = Vec::with_capacity(width);
    loop {
        let node = col + 1;
        reversed.push(node);
        let item = if node <= n { node - 1 } else { node - n - 1 };
        let prev = parent[state * width + col];
        state -= pow3[item];
        if prev == NO_PARENT {
            break;
        }
        col = prev as usize;
    }
    debug_assert_eq!(state, 0);
    let mut sequence = vec![0];
    sequence.extend(reversed.into_iter().rev());
    sequence.push(0);
    Ok(ExactOutcome::Optimal(Tour { sequence, cost }))
}

/// Enumerates all depot-rooted visit orders; ties go to the lexicographically smallest.
pub fn brute_force<S: Scalar>(instance: &Instance<S>) -> Result<ExactOutcome<S>, ExactError> {
    let n = instance.pairs();
    if n > BRUTE_FORCE_MAX_PAIRS {
        return Err(ExactError::TooManyPairs { pairs: n, limit: BRUTE_FORCE_MAX_PAIRS });
    }
    let mut best: Option<Tour<S>> = None;
    let mut sequence: Vec<NodeId> = Vec::with_capacity(2 * n + 2);
    for perm in (1..=2 * n).permutations(2 * n) {
        sequence.clear();
        sequence.push(0);
        sequence.extend(perm);
        sequence.push(0);
        if !validate_sequence(instance, &sequence).feasible {
            continue;
        }
        let cost: S = sequence.windows(2).map(|w| instance.cost(w[0], w[1])).sum();
        if best.as_ref().is_none_or(|b| cost < b.cost) {
            best = Some(Tour { sequence: sequence.clone(), cost });
        }
    }
    Ok(best.map_or(ExactOutcome::Infeasible, ExactOutcome::Optimal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{tour_cost, Point};
    use crate::tsplib::DistanceKind;

    fn fixture(capacity: f64) -> Instance<f64> {
        let pts = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 1.0), (2.0, 1.0)]
            .into_iter()
            .map(|(x, y)| Point::new(x, y))
            .collect();
        Instance::from_points("fixture", pts, &[1.0, 1.0], capacity, DistanceKind::ExactEuclidean).unwrap()
    }

    #[test]
    fn one_pair_triangle() {
        let pts = vec![Point::new(0.0, 0.0), Point::new(3.0, 0.0), Point::new(3.0, 4.0)];
        let inst = Instance::from_points("t", pts, &[1.0], 1.0, DistanceKind::ExactEuclidean).unwrap();
        let hk = held_karp(&inst).unwrap();
        assert_eq!(hk.tour().unwrap().sequence, vec![0, 1, 2, 0]);
        assert_eq!(hk.cost(), Some(12.0));
        assert_eq!(brute_force(&inst).unwrap(), hk);
    }

    #[test]
    fn two_pair_fixture_matches_enumeration() {
        for q in [1.0, 2.0] {
            let inst = fixture(q);
            let hk = held_karp(&inst).unwrap();
            let bf = brute_force(&inst).unwrap();
            assert!((hk.cost().unwrap() - bf.cost().unwrap()).abs() < 1e-12);
            let tour = hk.tour().unwrap();
            assert!(validate_sequence(&inst, &tour.sequence).feasible);
            assert!((tour_cost(&inst, &tour.sequence).unwrap() - tour.cost).abs() < 1e-12);
        }
        // 0 P1 P2 D2 D1 0 = 4 + sqrt2 is optimal with room for both items
        assert!((held_karp(&fixture(2.0)).unwrap().cost().unwrap() - (4.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn capacity_below_item_mass_is_infeasible() {
        let inst = fixture(0.5);
        assert_eq!(brute_force(&inst).unwrap(), ExactOutcome::Infeasible);
        assert_eq!(held_karp(&inst).unwrap(), ExactOutcome::Infeasible);
    }

    #[test]
    fn limits_are_enforced() {
        let pts = vec![Point::new(0.0, 0.0); 11];
        let inst = Instance::from_points("z", pts, &[1.0; 5], 5.0, DistanceKind::ExactEuclidean).unwrap();
        assert_eq!(brute_force(&inst), Err(ExactError::TooManyPairs { pairs: 5, limit: 4 }));
        let opts = HeldKarpOptions { max_pairs: 3, enforce_capacity: true };
        assert_eq!(held_karp_with(&inst, opts), Err(ExactError::TooManyPairs { pairs: 5, limit: 3 }));
        assert_eq!(held_karp(&inst).unwrap().cost(), Some(0.0));
    }

    #[test]
    fn dropping_capacity_relaxes() {
        let inst = fixture(1.0);
        let relaxed = held_karp_with(&inst, HeldKarpOptions { enforce_capacity: false, ..Default::default() }).unwrap();
        assert_eq!(relaxed.cost(), held_karp(&fixture(2.0)).unwrap().cost());
        assert!(relaxed.cost().unwrap() <= held_karp(&inst).unwrap().cost().unwrap());
    }
}
