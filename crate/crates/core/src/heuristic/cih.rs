//! Cheapest insertion construction with payload tracking over the whole partial tour.
//!
//! The partial tour is always closed (`[init, ..., init]`) and carries one payload entry
//! per position. A node `i` may be inserted after position `s` only if every entry from
//! `s` to the end stays within capacity once `q_i` is added, and, for a delivery, only
//! after its pickup. Among all admissible `(node, slot)` pairs the one with the lowest
//! insertion ratio wins.

use std::ops::Range;

use crate::model::{Instance, NodeId, NodeRole, Tour};
use crate::scalar::Scalar;

use super::{check_init, finish_tour, run_multi_start, ConstructionError, MultiStart, MultiStartError, StuckState};

#[derive(Debug, Clone, PartialEq)]
pub struct CihState<S> {
    pub partial: Vec<NodeId>,
    /// Event-based payload per position of `partial`.
    pub payload: Vec<S>,
    pub cost: S,
    /// Nodes not yet in the tour, ascending.
    pub remainder: Vec<NodeId>,
}

/// Insert `node` between positions `slot` and `slot + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InsertionChoice<S> {
    pub node: NodeId,
    pub slot: usize,
    pub ratio: S,
}

impl<S: Scalar> CihState<S> {
    /// Doubled start node. Payload starts at `[q, q]` for a pickup, `[0, -q]` for a
    /// delivery (its drop-off happens at the closing occurrence) and `[0, 0]` at the depot.
    pub fn new(instance: &Instance<S>, init: NodeId) -> Result<Self, ConstructionError<S>> {
        let init = check_init(instance, init)?;
        let q = instance.load(init);
        let payload = match instance.role(init) {
            NodeRole::Pickup(_) => vec![q, q],
            NodeRole::Delivery(_) => vec![S::zero(), q],
            NodeRole::Depot => vec![S::zero(), S::zero()],
        };
        let remainder = (0..instance.node_count()).filter(|&i| i != init).collect();
        Ok(CihState { partial: vec![init, init], payload, cost: S::zero(), remainder })
    }

    pub fn init(&self) -> NodeId {
        self.partial[0]
    }

    pub fn is_complete(&self) -> bool {
        self.remainder.is_empty()
    }

    /// `suffix_max[s] = max(payload[s..])`.
    fn suffix_max(&self) -> Vec<S> {
        let mut out = self.payload.clone();
        for s in (0..out.len().saturating_sub(1)).rev() {
            out[s] = out[s].max(out[s + 1]);
        }
        out
    }

    /// First position of every node in the partial tour.
    fn positions(&self, node_count: usize) -> Vec<Option<usize>> {
        let mut pos = vec![None; node_count];
        for (p, &node) in self.partial.iter().enumerate() {
            pos[node].get_or_insert(p);
        }
        pos
    }

    /// Best admissible insertion over all remaining nodes: lowest ratio, then lower node
    /// id, then earlier slot. `None` when every window is empty.
    pub fn best_insertion(&self, instance: &Instance<S>) -> Option<InsertionChoice<S>> {
        let suffix = self.suffix_max();
        let pos = self.positions(instance.node_count());
        let mut best: Option<InsertionChoice<S>> = None;
        for &node in &self.remainder {
            let window = slot_window(instance, &suffix, &pos, node);
            for slot in window {
                let ratio = insertion_ratio(instance, self.partial[slot], node, self.partial[slot + 1]);
                if best.is_none_or(|b| ratio < b.ratio) {
                    best = Some(InsertionChoice { node, slot, ratio });
                }
            }
        }
        best
    }

    /// Splices `choice.node` into the tour and updates payload and cost.
    ///
    /// Panics if the slot is outside the node's feasible window.
    pub fn insert(&mut self, instance: &Instance<S>, choice: InsertionChoice<S>) {
        let InsertionChoice { node, slot, .. } = choice;
        let window = feasible_slots(instance, self, node);
        assert!(window.contains(&slot), "slot {slot} is outside the feasible window {window:?} of node {node}");
        let idx = self.remainder.binary_search(&node).expect("node is in the remainder");
        self.remainder.remove(idx);

        let (a, b) = (self.partial[slot], self.partial[slot + 1]);
        self.cost += instance.cost(a, node) + instance.cost(node, b) - instance.cost(a, b);
        let q = instance.load(node);
        let entry = self.payload[slot] + q;
        for e in &mut self.payload[slot + 1..] {
            *e += q;
        }
        self.payload.insert(slot + 1, entry);
        self.partial.insert(slot + 1, node);
    }

    fn stuck(&self) -> StuckState<S> {
        StuckState {
            init: self.init(),
            partial: self.partial.clone(),
            payload: self.payload.clone(),
            remainder: self.remainder.clone(),
        }
    }
}

fn slot_window<S: Scalar>(instance: &Instance<S>, suffix: &[S], pos: &[Option<usize>], node: NodeId) -> Range<usize> {
    let slots = suffix.len() - 1;
    let q = instance.load(node);
    let capacity = instance.capacity();
    // suffix maxima never increase, so the capacity-feasible slots form a suffix
    let mut lo = suffix[..slots].partition_point(|&m| !(m + q).le_tol(capacity));
    if instance.is_delivery(node) {
        match pos[instance.pickup_of(node)] {
            Some(p) => lo = lo.max(p),
            None => return 0..0,
        }
    }
    lo..slots.max(lo)
}

/// Slots `s` (insert between positions `s` and `s + 1`) where `node` fits. Empty when it
/// cannot be inserted anywhere yet.
pub fn feasible_slots<S: Scalar>(instance: &Instance<S>, state: &CihState<S>, node: NodeId) -> Range<usize> {
    slot_window(instance, &state.suffix_max(), &state.positions(instance.node_count()), node)
}

/// `(C(a,i) + C(i,b)) / C(a,b)`, or the plain numerator when `C(a,b)` is zero.
pub fn insertion_ratio<S: Scalar>(instance: &Instance<S>, a: NodeId, i: NodeId, b: NodeId) -> S {
    let added = instance.cost(a, i) + instance.cost(i, b);
    let replaced = instance.cost(a, b);
    if replaced > S::zero() {
        added / replaced
    } else {
        added
    }
}

/// Single cheapest insertion construction from `init`.
pub fn cih_from<S: Scalar>(instance: &Instance<S>, init: NodeId) -> Result<Tour<S>, ConstructionError<S>> {
    let mut state = CihState::new(instance, init)?;
    while !state.is_complete() {
        let choice = state.best_insertion(instance).ok_or_else(|| ConstructionError::DeadEnd(state.stuck()))?;
        state.insert(instance, choice);
    }
    let init = state.init();
    finish_tour(instance, init, state.partial, state.cost)
}

/// Best cheapest insertion tour over the given starts.
pub fn cih_best<S: Scalar>(instance: &Instance<S>, inits: &[NodeId]) -> Result<MultiStart<S>, MultiStartError<S>> {
    run_multi_start(inits, |init| cih_from(instance, init))
}
