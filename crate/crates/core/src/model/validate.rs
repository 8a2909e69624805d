use std::fmt;

use crate::scalar::Scalar;

use super::instance::{Instance, NodeId, NodeRole};
use super::tour::{event_prefix_sums, Tour};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    VisitCount,
    Closure,
    Precedence,
    CapacityUpper,
    CapacityLower,
    TerminalLoad,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Sequence position the violation is attributed to, when there is one.
    pub position: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    /// First violation of `kind`, if any.
    pub fn find(&self, kind: ViolationKind) -> Option<&Violation> {
        self.violations.iter().find(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.feasible {
            return writeln!(f, "feasible");
        }
        writeln!(f, "infeasible ({} violations)", self.violations.len())?;
        for v in &self.violations {
            match v.position {
                Some(p) => writeln!(f, "  {:?} at position {p}: {}", v.kind, v.detail)?,
                None => writeln!(f, "  {:?}: {}", v.kind, v.detail)?,
            }
        }
        Ok(())
    }
}

pub fn validate<S: Scalar>(instance: &Instance<S>, tour: &Tour<S>) -> ValidationReport {
    validate_sequence(instance, &tour.sequence)
}

/// Checks a visit sequence against the full constraint system.
///
/// Structural problems are reported as violations, never as errors. Precedence is read
/// linearly from the start node; a tour that starts at a delivery is allowed to place
/// that delivery's pickup anywhere, since its drop-off happens at the closing occurrence.
/// The payload must stay within `[0, Q]` everywhere and end at zero.
pub fn validate_sequence<S: Scalar>(instance: &Instance<S>, sequence: &[NodeId]) -> ValidationReport {
    let mut violations = Vec::new();
    let node_count = instance.node_count();

    let mut physical = Vec::with_capacity(sequence.len());
    let mut ids_ok = true;
    for (pos, &id) in sequence.iter().enumerate() {
        match instance.physical(id) {
            Some(node) => physical.push(node),
            None => {
                ids_ok = false;
                violations.push(Violation {
                    kind: ViolationKind::VisitCount,
                    position: Some(pos),
                    detail: format!("unknown node id {id}"),
                });
            }
        }
    }

    let closed = ids_ok && physical.len() >= 2 && physical.first() == physical.last();
    if !closed && ids_ok {
        violations.push(Violation {
            kind: ViolationKind::Closure,
            position: physical.len().checked_sub(1),
            detail: match (physical.first(), physical.last()) {
                (Some(a), Some(b)) if physical.len() >= 2 => format!("starts at {a} but ends at {b}"),
                _ => "sequence needs at least an opening and a closing node".to_string(),
            },
        });
    }

    if !ids_ok || physical.is_empty() {
        return finish(violations);
    }

    // every node once, the start node twice (or once when the closing occurrence is missing)
    let start = physical[0];
    let mut first_pos = vec![None; node_count];
    let mut counts = vec![0usize; node_count];
    for (pos, &node) in physical.iter().enumerate() {
        counts[node] += 1;
        first_pos[node].get_or_insert(pos);
    }
    for node in 0..node_count {
        let expected = if node == start && closed { 2 } else { 1 };
        let seen = counts[node];
        let unclosed_start = node == start && !closed && seen == 1;
        if seen != expected && !unclosed_start {
            violations.push(Violation {
                kind: ViolationKind::VisitCount,
                position: first_pos[node],
                detail: format!("{} visited {seen} times, expected {expected}", instance.role(node)),
            });
        }
    }

    let start_role = instance.role(start);
    for pickup in 1..=instance.pairs() {
        let delivery = instance.delivery_of(pickup);
        if start_role == NodeRole::Delivery(pickup) {
            continue;
        }
        if let (Some(p), Some(d)) = (first_pos[pickup], first_pos[delivery]) {
            if d < p {
                violations.push(Violation {
                    kind: ViolationKind::Precedence,
                    position: Some(d),
                    detail: format!("delivery {delivery} at {d} precedes its pickup {pickup} at {p}"),
                });
            }
        }
    }

    if closed {
        let capacity = instance.capacity();
        let entries = event_prefix_sums(instance, &physical);
        for (pos, &load) in entries.iter().enumerate() {
            if !load.le_tol(capacity) {
                violations.push(Violation {
                    kind: ViolationKind::CapacityUpper,
                    position: Some(pos),
                    detail: format!("payload {load} exceeds capacity {capacity}"),
                });
            } else if !S::zero().le_tol(load) {
                violations.push(Violation {
                    kind: ViolationKind::CapacityLower,
                    position: Some(pos),
                    detail: format!("payload {load} is negative"),
                });
            }
        }
        let terminal = entries[entries.len() - 1];
        if !terminal.approx_eq(S::zero()) {
            violations.push(Violation {
                kind: ViolationKind::TerminalLoad,
                position: Some(entries.len() - 1),
                detail: format!("tour ends carrying {terminal}"),
            });
        }
    }

    finish(violations)
}

fn finish(violations: Vec<Violation>) -> ValidationReport {
    ValidationReport { feasible: violations.is_empty(), violations }
}
