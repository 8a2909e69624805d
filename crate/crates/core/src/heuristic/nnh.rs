//! Nearest neighbor construction: repeatedly append the closest node that keeps the
//! partial tour feasible.

use crate::model::{Instance, NodeId, NodeRole, Tour};
use crate::scalar::Scalar;

use super::{check_init, finish_tour, run_multi_start, ConstructionError, MultiStart, MultiStartError, StuckState};

#[derive(Debug, Clone, PartialEq)]
pub struct NnhState<S> {
    pub partial: Vec<NodeId>,
    /// Load carried after the last appended node.
    pub payload: S,
    pub cost: S,
    visited: Vec<bool>,
    remaining: usize,
}

impl<S: Scalar> NnhState<S> {
    /// Starts at `init`; a pickup start is already carrying its item.
    pub fn new(instance: &Instance<S>, init: NodeId) -> Result<Self, ConstructionError<S>> {
        let init = check_init(instance, init)?;
        let payload = match instance.role(init) {
            NodeRole::Pickup(_) => instance.load(init),
            _ => S::zero(),
        };
        let mut visited = vec![false; instance.node_count()];
        visited[init] = true;
        Ok(NnhState { partial: vec![init], payload, cost: S::zero(), visited, remaining: instance.node_count() - 1 })
    }

    pub fn init(&self) -> NodeId {
        self.partial[0]
    }

    pub fn end(&self) -> NodeId {
        *self.partial.last().expect("partial tour is never empty")
    }

    pub fn is_complete(&self) -> bool {
        self.remaining == 0
    }

    pub fn is_visited(&self, node: NodeId) -> bool {
        self.visited[node]
    }

    pub fn remainder(&self) -> Vec<NodeId> {
        (0..self.visited.len()).filter(|&i| !self.visited[i]).collect()
    }

    /// Precedence and capacity gate for appending `node`.
    pub fn admits(&self, instance: &Instance<S>, node: NodeId) -> bool {
        !self.visited[node]
            && (!instance.is_delivery(node) || self.visited[instance.pickup_of(node)])
            && (self.payload + instance.load(node)).le_tol(instance.capacity())
    }

    pub fn append(&mut self, instance: &Instance<S>, node: NodeId) {
        debug_assert!(self.admits(instance, node));
        self.cost += instance.cost(self.end(), node);
        self.payload += instance.load(node);
        self.visited[node] = true;
        self.remaining -= 1;
        self.partial.push(node);
    }

    /// Nearest admissible node from the current end; ties go to the lower id.
    pub fn nearest(&self, instance: &Instance<S>) -> Option<NodeId> {
        let from = self.end();
        let mut best: Option<(S, NodeId)> = None;
        for node in 0..instance.node_count() {
            if !self.admits(instance, node) {
                continue;
            }
            let c = instance.cost(from, node);
            if best.is_none_or(|(bc, _)| c < bc) {
                best = Some((c, node));
            }
        }
        best.map(|(_, node)| node)
    }

    fn stuck(&self) -> StuckState<S> {
        StuckState {
            init: self.init(),
            partial: self.partial.clone(),
            payload: vec![self.payload],
            remainder: self.remainder(),
        }
    }
}

/// Every unvisited node that may be appended next.
pub fn feasible_candidates<S: Scalar>(instance: &Instance<S>, state: &NnhState<S>) -> Vec<NodeId> {
    (0..instance.node_count()).filter(|&i| state.admits(instance, i)).collect()
}

/// Single nearest neighbor construction from `init`.
pub fn nnh_from<S: Scalar>(instance: &Instance<S>, init: NodeId) -> Result<Tour<S>, ConstructionError<S>> {
    let mut state = NnhState::new(instance, init)?;
    while !state.is_complete() {
        let next = state.nearest(instance).ok_or_else(|| ConstructionError::DeadEnd(state.stuck()))?;
        state.append(instance, next);
    }
    let init = state.init();
    let cost = state.cost + instance.cost(state.end(), init);
    let mut sequence = state.partial;
    sequence.push(init);
    finish_tour(instance, init, sequence, cost)
}

/// Best nearest neighbor tour over the given starts.
pub fn nnh_best<S: Scalar>(instance: &Instance<S>, inits: &[NodeId]) -> Result<MultiStart<S>, MultiStartError<S>> {
    run_multi_start(inits, |init| nnh_from(instance, init))
}
