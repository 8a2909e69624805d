use crate::scalar::Scalar;

use super::instance::{Instance, ModelError, NodeId, NodeRole};

/// A closed visit sequence: `sequence[0] == sequence[last]` is the start node.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour<S> {
    pub sequence: Vec<NodeId>,
    pub cost: S,
}

impl<S: Scalar> Tour<S> {
    /// Wraps a closed sequence and computes its cost. The depot alias is folded onto `0`.
    pub fn evaluate(instance: &Instance<S>, sequence: Vec<NodeId>) -> Result<Self, ModelError> {
        let sequence = physical_sequence(instance, &sequence)?;
        let cost = tour_cost(instance, &sequence)?;
        Ok(Tour { sequence, cost })
    }

    pub fn start(&self) -> NodeId {
        self.sequence[0]
    }

    pub fn is_depot_rooted(&self) -> bool {
        self.sequence.first() == Some(&0)
    }

    /// Positions strictly between the opening and closing occurrence of the start node.
    pub fn interior(&self) -> &[NodeId] {
        let len = self.sequence.len();
        if len < 2 {
            &[]
        } else {
            &self.sequence[1..len - 1]
        }
    }
}

/// Cargo carried when leaving each position of a closed sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PayloadProfile<S> {
    pub entries: Vec<S>,
}

impl<S: Scalar> PayloadProfile<S> {
    pub fn max(&self) -> S {
        self.entries.iter().copied().fold(S::neg_infinity(), S::max)
    }

    pub fn last(&self) -> Option<S> {
        self.entries.last().copied()
    }
}

pub(crate) fn physical_sequence<S: Scalar>(
    instance: &Instance<S>,
    sequence: &[NodeId],
) -> Result<Vec<NodeId>, ModelError> {
    sequence
        .iter()
        .map(|&id| {
            instance
                .physical(id)
                .ok_or(ModelError::InvalidNode { id, node_count: instance.node_count() })
        })
        .collect()
}

fn check_closed(sequence: &[NodeId]) -> Result<(), ModelError> {
    match (sequence.first(), sequence.last()) {
        (Some(first), Some(last)) if sequence.len() >= 2 && first == last => Ok(()),
        _ => Err(ModelError::NotClosed),
    }
}

/// Sum of arc costs along a closed sequence.
pub fn tour_cost<S: Scalar>(instance: &Instance<S>, sequence: &[NodeId]) -> Result<S, ModelError> {
    let sequence = physical_sequence(instance, sequence)?;
    check_closed(&sequence)?;
    Ok(sequence.windows(2).map(|w| instance.cost(w[0], w[1])).sum())
}

/// Event-based running load along a closed sequence.
///
/// Interior nodes add their load at their own position. The start node fires at the
/// opening occurrence when it is the depot or a pickup, and at the closing occurrence
/// when it is a delivery, so a complete tour always ends at zero.
pub fn payload_profile<S: Scalar>(
    instance: &Instance<S>,
    sequence: &[NodeId],
) -> Result<PayloadProfile<S>, ModelError> {
    let sequence = physical_sequence(instance, sequence)?;
    check_closed(&sequence)?;
    Ok(PayloadProfile { entries: event_prefix_sums(instance, &sequence) })
}

/// Prefix sums for an already checked, physical, closed sequence.
pub(crate) fn event_prefix_sums<S: Scalar>(instance: &Instance<S>, sequence: &[NodeId]) -> Vec<S> {
    let last = sequence.len() - 1;
    let start_is_delivery = matches!(instance.role(sequence[0]), NodeRole::Delivery(_));
    let mut load = S::zero();
    sequence
        .iter()
        .enumerate()
        .map(|(pos, &node)| {
            let fires = match pos {
                0 => !start_is_delivery,
                p if p == last => start_is_delivery,
                _ => true,
            };
            if fires {
                load += instance.load(node);
            }
            load
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Point;
    use crate::tsplib::DistanceKind;

    fn one_pair() -> Instance<f64> {
        let pts = vec![Point::new(0.0, 0.0), Point::new(3.0, 0.0), Point::new(3.0, 4.0)];
        Instance::from_points("one", pts, &[1.0], 1.0, DistanceKind::ExactEuclidean).unwrap()
    }

    fn two_pair() -> Instance<f64> {
        let pts = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 1.0), (2.0, 1.0)]
            .into_iter()
            .map(|(x, y)| Point::new(x, y))
            .collect();
        Instance::from_points("fixture", pts, &[1.0, 1.0], 2.0, DistanceKind::ExactEuclidean).unwrap()
    }

    #[test]
    fn empty_loop_costs_nothing() {
        assert_eq!(tour_cost(&two_pair(), &[0, 0]).unwrap(), 0.0);
    }

    #[test]
    fn hand_summed_two_pair_tour() {
        // 0(0,0) -> 1(1,0) -> 3(1,1) -> 2(2,0) -> 4(2,1) -> 0
        // arcs: 1, 1, sqrt2, 1, sqrt5
        let expected = 1.0 + 1.0 + 2f64.sqrt() + 1.0 + 5f64.sqrt();
        let cost = tour_cost(&two_pair(), &[0, 1, 3, 2, 4, 0]).unwrap();
        assert!((cost - expected).abs() < 1e-12);
    }

    #[test]
    fn cost_requires_closed_sequence() {
        assert_eq!(tour_cost(&two_pair(), &[0, 1, 3]), Err(ModelError::NotClosed));
        assert_eq!(tour_cost(&two_pair(), &[0]), Err(ModelError::NotClosed));
        assert_eq!(tour_cost(&two_pair(), &[]), Err(ModelError::NotClosed));
        assert!(matches!(tour_cost(&two_pair(), &[0, 9, 0]), Err(ModelError::InvalidNode { id: 9, .. })));
    }

    #[test]
    fn alias_closes_depot_tour() {
        let inst = one_pair();
        let tour = Tour::evaluate(&inst, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(tour.sequence, vec![0, 1, 2, 0]);
        assert_eq!(tour.cost, 3.0 + 4.0 + 5.0);
        assert!(tour.is_depot_rooted());
        assert_eq!(tour.interior(), &[1, 2]);
    }

    #[test]
    fn payload_depot_start() {
        let p = payload_profile(&one_pair(), &[0, 1, 2, 0]).unwrap();
        assert_eq!(p.entries, vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn payload_delivery_start_fires_at_close() {
        let p = payload_profile(&one_pair(), &[2, 1, 0, 2]).unwrap();
        assert_eq!(p.entries, vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn payload_pickup_start_fires_at_open() {
        let p = payload_profile(&one_pair(), &[1, 2, 0, 1]).unwrap();
        assert_eq!(p.entries, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(p.max(), 1.0);
        assert_eq!(p.last(), Some(0.0));
    }
}
