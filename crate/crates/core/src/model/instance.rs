use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::tsplib::{tsplib_distance, DistanceKind};

/// Node identifier: `0` is the depot, `1..=n` pickups, `n+1..=2n` deliveries.
/// `2n+1` is accepted as an alias of the depot wherever ids are read.
pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("node id {id} is out of range (instance has {node_count} nodes plus the depot alias)")]
    InvalidNode { id: NodeId, node_count: usize },
    #[error("tour sequence is not closed: it must start and end at the same node")]
    NotClosed,
    #[error("item {pair} has load {load}; pickup loads must be positive and finite")]
    InvalidLoad { pair: usize, load: f64 },
    #[error("capacity {0} must be finite and nonnegative")]
    InvalidCapacity(f64),
    #[error("expected {expected} nodes, got {got}")]
    NodeCount { expected: usize, got: usize },
    #[error("invalid cost matrix: {0}")]
    InvalidMatrix(String),
    #[error("instance has no coordinates")]
    NoCoordinates,
    #[error("coordinate of node {0} is not finite")]
    NonFiniteCoordinate(NodeId),
}

/// How arc costs are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricMode {
    /// TSPLIB `nint` convention on Euclidean distances.
    TsplibRounded,
    /// Unrounded Euclidean distance.
    ExactEuclidean,
    /// Costs given directly as a matrix.
    ExplicitMatrix,
}

impl MetricMode {
    pub fn distance_kind(self) -> Option<DistanceKind> {
        match self {
            MetricMode::TsplibRounded => Some(DistanceKind::TsplibRounded),
            MetricMode::ExactEuclidean => Some(DistanceKind::ExactEuclidean),
            MetricMode::ExplicitMatrix => None,
        }
    }
}

impl From<DistanceKind> for MetricMode {
    fn from(kind: DistanceKind) -> Self {
        match kind {
            DistanceKind::TsplibRounded => MetricMode::TsplibRounded,
            DistanceKind::ExactEuclidean => MetricMode::ExactEuclidean,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeRole {
    Depot,
    /// Pickup of the item with the given 1-based pair index.
    Pickup(usize),
    /// Delivery of the item with the given 1-based pair index.
    Delivery(usize),
}

impl fmt::Display for NodeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRole::Depot => write!(f, "depot"),
            NodeRole::Pickup(i) => write!(f, "pickup {i}"),
            NodeRole::Delivery(i) => write!(f, "delivery {i}"),
        }
    }
}

/// A multi-commodity one-to-one pickup-and-delivery instance with `n` items.
///
/// The physical node set is `0..=2n`. Pickup `i` carries load `q_i > 0` and its
/// delivery `n + i` carries `-q_i`; the depot carries nothing. Instances are
/// immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<S> {
    name: String,
    pairs: usize,
    cost: Vec<S>,
    coords: Option<Vec<Point<S>>>,
    loads: Vec<S>,
    capacity: S,
    metric: MetricMode,
}

impl<S: Scalar> Instance<S> {
    /// Builds an instance from node coordinates ordered depot, pickups `1..=n`, deliveries
    /// `n+1..=2n`, with one positive load per item.
    pub fn from_points(
        name: impl Into<String>,
        points: Vec<Point<S>>,
        item_loads: &[S],
        capacity: S,
        kind: DistanceKind,
    ) -> Result<Self, ModelError> {
        let pairs = item_loads.len();
        let node_count = 2 * pairs + 1;
        if points.len() != node_count {
            return Err(ModelError::NodeCount { expected: node_count, got: points.len() });
        }
        if let Some(bad) = points.iter().position(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(ModelError::NonFiniteCoordinate(bad));
        }
        let cost = coordinate_matrix(&points, kind);
        Self::assemble(name.into(), pairs, cost, Some(points), item_loads, capacity, kind.into())
    }

    /// Builds an instance from an explicit square cost matrix of side `2n + 1`.
    pub fn from_matrix(
        name: impl Into<String>,
        matrix: Vec<Vec<S>>,
        item_loads: &[S],
        capacity: S,
    ) -> Result<Self, ModelError> {
        let pairs = item_loads.len();
        let node_count = 2 * pairs + 1;
        if matrix.len() != node_count {
            return Err(ModelError::NodeCount { expected: node_count, got: matrix.len() });
        }
        let mut cost = Vec::with_capacity(node_count * node_count);
        for (i, row) in matrix.into_iter().enumerate() {
            if row.len() != node_count {
                return Err(ModelError::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {node_count}",
                    row.len()
                )));
            }
            for (j, c) in row.into_iter().enumerate() {
                if !c.is_finite() || c < S::zero() {
                    return Err(ModelError::InvalidMatrix(format!("entry ({i},{j}) = {c}")));
                }
                if i == j && c != S::zero() {
                    return Err(ModelError::InvalidMatrix(format!("diagonal entry {i} is {c}")));
                }
                cost.push(c);
            }
        }
        Self::assemble(name.into(), pairs, cost, None, item_loads, capacity, MetricMode::ExplicitMatrix)
    }

    fn assemble(
        name: String,
        pairs: usize,
        cost: Vec<S>,
        coords: Option<Vec<Point<S>>>,
        item_loads: &[S],
        capacity: S,
        metric: MetricMode,
    ) -> Result<Self, ModelError> {
        if !capacity.is_finite() || capacity < S::zero() {
            return Err(ModelError::InvalidCapacity(capacity.to_f64().unwrap_or(f64::NAN)));
        }
        let mut loads = vec![S::zero(); 2 * pairs + 1];
        for (k, &q) in item_loads.iter().enumerate() {
            if !q.is_finite() || q <= S::zero() {
                return Err(ModelError::InvalidLoad { pair: k + 1, load: q.to_f64().unwrap_or(f64::NAN) });
            }
            loads[k + 1] = q;
            loads[pairs + k + 1] = -q;
        }
        Ok(Instance { name, pairs, cost, coords, loads, capacity, metric })
    }

    /// Same geometry and loads under another coordinate metric.
    pub fn with_metric(&self, kind: DistanceKind) -> Result<Self, ModelError> {
        let points = self.coords.clone().ok_or(ModelError::NoCoordinates)?;
        Self::from_points(self.name.clone(), points, &self.item_loads(), self.capacity, kind)
    }

    /// Same instance with a different capacity.
    pub fn with_capacity(&self, capacity: S) -> Result<Self, ModelError> {
        Self::assemble(
            self.name.clone(),
            self.pairs,
            self.cost.clone(),
            self.coords.clone(),
            &self.item_loads(),
            capacity,
            self.metric,
        )
    }

    /// Coordinates multiplied by `factor`, costs recomputed.
    pub fn scaled(&self, factor: S) -> Result<Self, ModelError> {
        let kind = self.metric.distance_kind().ok_or(ModelError::NoCoordinates)?;
        let points = self
            .coords
            .as_ref()
            .ok_or(ModelError::NoCoordinates)?
            .iter()
            .map(|p| Point::new(p.x * factor, p.y * factor))
            .collect();
        Self::from_points(self.name.clone(), points, &self.item_loads(), self.capacity, kind)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of items `n`.
    pub fn pairs(&self) -> usize {
        self.pairs
    }

    /// Physical node count `2n + 1`.
    pub fn node_count(&self) -> usize {
        2 * self.pairs + 1
    }

    pub fn depot(&self) -> NodeId {
        0
    }

    /// Logical id `2n + 1` of the terminal depot copy.
    pub fn terminal_alias(&self) -> NodeId {
        2 * self.pairs + 1
    }

    pub fn metric(&self) -> MetricMode {
        self.metric
    }

    pub fn capacity(&self) -> S {
        self.capacity
    }

    pub fn coords(&self) -> Option<&[Point<S>]> {
        self.coords.as_deref()
    }

    /// Signed load vector indexed by physical node id.
    pub fn loads(&self) -> &[S] {
        &self.loads
    }

    pub fn load(&self, node: NodeId) -> S {
        self.loads[node]
    }

    /// Positive item loads `q_1..q_n`.
    pub fn item_loads(&self) -> Vec<S> {
        self.loads[1..=self.pairs].to_vec()
    }

    /// Maps a logical id to its physical node, folding the terminal alias onto the depot.
    pub fn physical(&self, id: NodeId) -> Option<NodeId> {
        if id < self.node_count() {
            Some(id)
        } else if id == self.terminal_alias() {
            Some(0)
        } else {
            None
        }
    }

    pub fn role(&self, node: NodeId) -> NodeRole {
        if node == 0 {
            NodeRole::Depot
        } else if node <= self.pairs {
            NodeRole::Pickup(node)
        } else {
            NodeRole::Delivery(node - self.pairs)
        }
    }

    pub fn is_pickup(&self, node: NodeId) -> bool {
        node >= 1 && node <= self.pairs
    }

    pub fn is_delivery(&self, node: NodeId) -> bool {
        node > self.pairs && node < self.node_count()
    }

    /// Pickup node that must precede `delivery`.
    pub fn pickup_of(&self, delivery: NodeId) -> NodeId {
        debug_assert!(self.is_delivery(delivery));
        delivery - self.pairs
    }

    pub fn delivery_of(&self, pickup: NodeId) -> NodeId {
        debug_assert!(self.is_pickup(pickup));
        pickup + self.pairs
    }

    /// Pickups whose load alone exceeds the capacity. Any such item makes the instance
    /// infeasible.
    pub fn oversized_items(&self) -> Vec<NodeId> {
        (1..=self.pairs).filter(|&i| !self.loads[i].le_tol(self.capacity)).collect()
    }

    pub fn is_capacity_feasible(&self) -> bool {
        self.oversized_items().is_empty()
    }

    /// Arc cost between physical nodes. Panics on ids outside `0..=2n`.
    #[inline]
    pub fn cost(&self, i: NodeId, j: NodeId) -> S {
        self.cost[i * self.node_count() + j]
    }

    /// Checked arc cost; accepts the depot alias `2n + 1`.
    pub fn arc_cost(&self, i: NodeId, j: NodeId) -> Result<S, ModelError> {
        let node_count = self.node_count();
        let a = self.physical(i).ok_or(ModelError::InvalidNode { id: i, node_count })?;
        let b = self.physical(j).ok_or(ModelError::InvalidNode { id: j, node_count })?;
        Ok(self.cost(a, b))
    }
}

fn coordinate_matrix<S: Scalar>(points: &[Point<S>], kind: DistanceKind) -> Vec<S> {
    let n = points.len();
    let mut cost = vec![S::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = tsplib_distance(points[i], points[j], kind);
            cost[i * n + j] = d;
            cost[j * n + i] = d;
        }
    }
    cost
}
