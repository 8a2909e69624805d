//! Multi-start greedy construction heuristics.
//!
//! Both heuristics can start from any node. The initial payload depends on the role of
//! the start node, and every returned tour is run through the validator before it is
//! handed back.

pub mod cih;
pub mod nnh;

use std::fmt;

use rayon::prelude::*;

use crate::model::{validate_sequence, Instance, NodeId, Tour, ValidationReport};
use crate::scalar::Scalar;

pub use cih::{cih_best, cih_from, feasible_slots, insertion_ratio, CihState, InsertionChoice};
pub use nnh::{feasible_candidates, nnh_best, nnh_from, NnhState};

/// Which start nodes a multi-start run tries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitPolicy {
    AllNodes,
    DepotOnly,
    Single(NodeId),
}

impl InitPolicy {
    pub fn inits<S: Scalar>(&self, instance: &Instance<S>) -> Vec<NodeId> {
        match *self {
            InitPolicy::AllNodes => (0..instance.node_count()).collect(),
            InitPolicy::DepotOnly => vec![instance.depot()],
            InitPolicy::Single(id) => vec![id],
        }
    }
}

/// Snapshot of a construction that ran out of feasible moves.
#[derive(Debug, Clone, PartialEq)]
pub struct StuckState<S> {
    pub init: NodeId,
    pub partial: Vec<NodeId>,
    /// Current load for nearest neighbor; the payload profile of the partial tour for
    /// cheapest insertion.
    pub payload: Vec<S>,
    pub remainder: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstructionError<S> {
    DeadEnd(StuckState<S>),
    InvalidInit { init: NodeId, node_count: usize },
    /// The finished tour did not pass validation. This is a bug, not a property of the data.
    Invariant { init: NodeId, report: ValidationReport },
}

impl<S: Scalar> fmt::Display for ConstructionError<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionError::DeadEnd(s) => write!(
                f,
                "start {}: dead end after {} visits with {} nodes left, payload {:?}",
                s.init,
                s.partial.len(),
                s.remainder.len(),
                s.payload.last().copied().unwrap_or_else(S::zero)
            ),
            ConstructionError::InvalidInit { init, node_count } => {
                write!(f, "start node {init} is not in 0..{node_count}")
            }
            ConstructionError::Invariant { init, report } => {
                write!(f, "start {init}: constructed tour failed validation: {report}")
            }
        }
    }
}

impl<S: Scalar> std::error::Error for ConstructionError<S> {}

/// Per-start result of a multi-start run.
#[derive(Debug, Clone, PartialEq)]
pub struct InitOutcome<S> {
    pub init: NodeId,
    pub result: Result<S, ConstructionError<S>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiStart<S> {
    pub best: Tour<S>,
    pub best_init: NodeId,
    /// One entry per requested start, in request order.
    pub table: Vec<InitOutcome<S>>,
}

impl<S: Scalar> MultiStart<S> {
    pub fn dead_ends(&self) -> usize {
        self.table.iter().filter(|o| matches!(o.result, Err(ConstructionError::DeadEnd(_)))).count()
    }

    /// Costs of the successful starts, in request order.
    pub fn costs(&self) -> Vec<S> {
        self.table.iter().filter_map(|o| o.result.as_ref().ok().copied()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MultiStartError<S> {
    NoInits,
    /// No start produced a tour.
    AllFailed(Vec<InitOutcome<S>>),
    /// Some start produced an invalid tour.
    Invariant { init: NodeId, report: ValidationReport },
}

impl<S: Scalar> fmt::Display for MultiStartError<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiStartError::NoInits => write!(f, "no start nodes given"),
            MultiStartError::AllFailed(table) => {
                write!(f, "all {} starts failed", table.len())?;
                if let Some(Err(e)) = table.first().map(|o| &o.result) {
                    write!(f, " (first: {e})")?;
                }
                Ok(())
            }
            MultiStartError::Invariant { init, report } => {
                write!(f, "start {init}: constructed tour failed validation: {report}")
            }
        }
    }
}

impl<S: Scalar> std::error::Error for MultiStartError<S> {}

pub(crate) fn check_init<S: Scalar>(instance: &Instance<S>, init: NodeId) -> Result<NodeId, ConstructionError<S>> {
    instance
        .physical(init)
        .ok_or(ConstructionError::InvalidInit { init, node_count: instance.node_count() })
}

/// Validates a finished construction and wraps it as a tour. The stored cost is summed
/// along the final sequence, so it matches `tour_cost` bit for bit; `running_cost` is
/// the construction's own bookkeeping and must agree within tolerance.
pub(crate) fn finish_tour<S: Scalar>(
    instance: &Instance<S>,
    init: NodeId,
    sequence: Vec<NodeId>,
    running_cost: S,
) -> Result<Tour<S>, ConstructionError<S>> {
    let report = validate_sequence(instance, &sequence);
    if !report.feasible {
        return Err(ConstructionError::Invariant { init, report });
    }
    let cost: S = sequence.windows(2).map(|w| instance.cost(w[0], w[1])).sum();
    debug_assert!((cost - running_cost).abs() <= S::tolerance().sqrt() * cost.max(S::one()));
    Ok(Tour { sequence, cost })
}

/// Runs `build` for every start and keeps the cheapest tour; equal costs go to the lower
/// start id. Starts may run in parallel, the reduction does not depend on completion order.
pub(crate) fn run_multi_start<S, F>(inits: &[NodeId], build: F) -> Result<MultiStart<S>, MultiStartError<S>>
where
    S: Scalar,
    F: Fn(NodeId) -> Result<Tour<S>, ConstructionError<S>> + Sync,
{
    if inits.is_empty() {
        return Err(MultiStartError::NoInits);
    }
    let results: Vec<(NodeId, Result<Tour<S>, ConstructionError<S>>)> =
        inits.par_iter().map(|&init| (init, build(init))).collect();

    let mut best: Option<(NodeId, Tour<S>)> = None;
    let mut table = Vec::with_capacity(results.len());
    for (init, result) in results {
        match result {
            Ok(tour) => {
                table.push(InitOutcome { init, result: Ok(tour.cost) });
                let better = match &best {
                    None => true,
                    Some((b_init, b)) => tour.cost < b.cost || (tour.cost == b.cost && init < *b_init),
                };
                if better {
                    best = Some((init, tour));
                }
            }
            Err(ConstructionError::Invariant { init, report }) => {
                return Err(MultiStartError::Invariant { init, report });
            }
            Err(e) => table.push(InitOutcome { init, result: Err(e) }),
        }
    }
    match best {
        Some((best_init, best)) => Ok(MultiStart { best, best_init, table }),
        None => Err(MultiStartError::AllFailed(table)),
    }
}
