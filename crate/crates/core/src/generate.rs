//! Turns a TSPLIB point cloud into a pickup-and-delivery instance with spatially
//! structured precedence.
//!
//! Points are ranked by distance from the centroid. Rank 1 becomes the depot and the
//! remaining ranks are paired from the outside in: `(2, m)`, `(3, m-1)`, ... where `m`
//! is the point count. With an even point count the middle rank would pair with itself
//! and is dropped.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{Instance, ModelError, Point};
use crate::scalar::Scalar;
use crate::tsplib::{tsplib_distance, DistanceKind, PointCloud};

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("point cloud is empty")]
    Empty,
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("capacity must be at least one item")]
    ZeroCapacity,
    #[error("unit load must be positive and finite")]
    BadUnitLoad,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which side of each pair sits closer to the centroid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    PickupsCentral,
    DeliveriesCentral,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::PickupsCentral, Direction::DeliveriesCentral];

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::PickupsCentral => "pickups-central",
            Direction::DeliveriesCentral => "deliveries-central",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "pickups-central" | "pickupscentral" => Ok(Direction::PickupsCentral),
            "deliveries-central" | "deliveriescentral" => Ok(Direction::DeliveriesCentral),
            other => Err(format!("unknown direction {other:?} (expected pickups-central or deliveries-central)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationSpec<S> {
    pub direction: Direction,
    /// Capacity counted in items; `Q = capacity_items * unit_load`.
    pub capacity_items: u32,
    pub unit_load: S,
}

impl<S: Scalar> GenerationSpec<S> {
    pub fn new(direction: Direction, capacity_items: u32) -> Self {
        GenerationSpec { direction, capacity_items, unit_load: S::one() }
    }
}

/// Provenance of a generated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationMetadata {
    pub source: String,
    pub direction: Direction,
    pub capacity_items: u32,
    pub unit_load: f64,
    /// File index of the depot point.
    pub depot: usize,
    /// File index of the self-paired middle point, when one was dropped.
    pub dropped: Option<usize>,
    /// File index of the point behind each node id, in node id order.
    pub node_origin: Vec<usize>,
}

impl GenerationMetadata {
    /// `key = value` sidecar text.
    pub fn to_kv_string(&self) -> String {
        let origin: Vec<String> = self.node_origin.iter().map(ToString::to_string).collect();
        format!(
            "source = {}\ndirection = {}\ncapacity_items = {}\nunit_load = {}\ndepot = {}\ndropped = {}\nnode_origin = {}\n",
            self.source,
            self.direction,
            self.capacity_items,
            self.unit_load,
            self.depot,
            self.dropped.map_or_else(|| "none".to_string(), |d| d.to_string()),
            origin.join(" "),
        )
    }
}

#[derive(Debug, Clone)]
pub struct Generated<S> {
    pub instance: Instance<S>,
    pub metadata: GenerationMetadata,
}

/// Arithmetic mean of the cloud's coordinates.
pub fn centroid<S: Scalar>(cloud: &PointCloud<S>) -> Result<Point<S>, GenerateError> {
    if cloud.is_empty() {
        return Err(GenerateError::Empty);
    }
    let count = S::from_usize(cloud.len()).ok_or(GenerateError::Empty)?;
    let (sx, sy) = cloud.points.iter().fold((S::zero(), S::zero()), |(sx, sy), p| (sx + p.x, sy + p.y));
    Ok(Point::new(sx / count, sy / count))
}

/// Positions into `cloud.points`, nearest to the centroid first; ties keep the lower
/// file index first.
pub fn rank_by_centroid<S: Scalar>(cloud: &PointCloud<S>) -> Vec<usize> {
    let Ok(center) = centroid(cloud) else {
        return Vec::new();
    };
    let dist: Vec<S> = cloud
        .points
        .iter()
        .map(|p| tsplib_distance(center, p.point(), DistanceKind::ExactEuclidean))
        .collect();
    let mut order: Vec<usize> = (0..cloud.len()).collect();
    order.sort_by(|&a, &b| {
        dist[a]
            .partial_cmp(&dist[b])
            .unwrap_or(Ordering::Equal)
            .then(cloud.points[a].index.cmp(&cloud.points[b].index))
    });
    order
}

/// Builds the instance: depot = rank 1, pair `k` joins ranks `k + 1` and `m + 1 - k`.
///
/// The lower rank of each pair is the pickup for [`Direction::PickupsCentral`] and the
/// delivery for [`Direction::DeliveriesCentral`]. Costs use the exact Euclidean metric;
/// switch with [`Instance::with_metric`].
pub fn generate<S: Scalar>(cloud: &PointCloud<S>, spec: &GenerationSpec<S>) -> Result<Generated<S>, GenerateError> {
    if cloud.len() < 3 {
        return Err(GenerateError::TooFewPoints(cloud.len()));
    }
    if spec.capacity_items == 0 {
        return Err(GenerateError::ZeroCapacity);
    }
    if !spec.unit_load.is_finite() || spec.unit_load <= S::zero() {
        return Err(GenerateError::BadUnitLoad);
    }
    let ranked = rank_by_centroid(cloud);
    let m = ranked.len();
    let pairs = (m - 1) / 2;
    // rank r (1-based) lives at ranked[r - 1]
    let at_rank = |r: usize| ranked[r - 1];

    let mut pickups = Vec::with_capacity(pairs);
    let mut deliveries = Vec::with_capacity(pairs);
    for k in 1..=pairs {
        let (inner, outer) = (at_rank(k + 1), at_rank(m + 1 - k));
        let (p, d) = match spec.direction {
            Direction::PickupsCentral => (inner, outer),
            Direction::DeliveriesCentral => (outer, inner),
        };
        pickups.push(p);
        deliveries.push(d);
    }
    let dropped = m.is_multiple_of(2).then(|| cloud.points[at_rank(m / 2 + 1)].index);

    let order: Vec<usize> = std::iter::once(at_rank(1)).chain(pickups).chain(deliveries).collect();
    let points = order.iter().map(|&i| cloud.points[i].point()).collect();
    let capacity = spec.unit_load * S::from_u32(spec.capacity_items).ok_or(GenerateError::ZeroCapacity)?;
    let loads = vec![spec.unit_load; pairs];
    let instance = Instance::from_points(cloud.name.clone(), points, &loads, capacity, DistanceKind::ExactEuclidean)?;

    let metadata = GenerationMetadata {
        source: cloud.name.clone(),
        direction: spec.direction,
        capacity_items: spec.capacity_items,
        unit_load: spec.unit_load.to_f64().unwrap_or(f64::NAN),
        depot: cloud.points[at_rank(1)].index,
        dropped,
        node_origin: order.iter().map(|&i| cloud.points[i].index).collect(),
    };
    Ok(Generated { instance, metadata })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tsplib::IndexedPoint;

    fn cloud(points: &[(f64, f64)]) -> PointCloud<f64> {
        PointCloud {
            name: "t".into(),
            points: points.iter().enumerate().map(|(i, &(x, y))| IndexedPoint { index: i + 1, x, y }).collect(),
            declared_dimension: points.len(),
        }
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(centroid(&cloud(&[(0.0, 0.0), (2.0, 0.0), (0.0, 2.0), (2.0, 2.0)])).unwrap(), Point::new(1.0, 1.0));
        assert_eq!(centroid(&cloud(&[(5.0, 7.0)])).unwrap(), Point::new(5.0, 7.0));
        assert_eq!(centroid(&cloud(&[(0.0, 0.0), (3.0, 0.0)])).unwrap(), Point::new(1.5, 0.0));
        assert_eq!(centroid(&cloud(&[])), Err(GenerateError::Empty));
    }

    #[test]
    fn ranking_examples() {
        // centroid (0,0): distances 0, 1, 2 in file order already
        assert_eq!(rank_by_centroid(&cloud(&[(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (2.0, 0.0), (-2.0, 0.0)])), vec![0, 1, 2, 3, 4]);
        // the two points at distance 1 keep file order
        assert_eq!(rank_by_centroid(&cloud(&[(2.0, 0.0), (0.0, 1.0), (0.0, -1.0), (-2.0, 0.0)])), vec![1, 2, 0, 3]);
        // square: all tie
        assert_eq!(rank_by_centroid(&cloud(&[(0.0, 0.0), (2.0, 0.0), (0.0, 2.0), (2.0, 2.0)])), vec![0, 1, 2, 3]);
    }

    // points spread at growing distances around the centroid
    fn line(count: usize) -> PointCloud<f64> {
        let mut pts = vec![(0.0, 0.0)];
        for k in 1..count {
            let d = k as f64;
            pts.push(if k % 2 == 1 { (d, 0.0) } else { (0.0, -d) });
        }
        // shift so the centroid sits on the first point
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (cx, cy) = (sx / count as f64, sy / count as f64);
        cloud(&pts.iter().map(|p| (p.0 - cx, p.1 - cy)).collect::<Vec<_>>())
    }

    #[test]
    fn five_points_pair_outside_in() {
        let c = cloud(&[(0.0, 0.0), (1.0, 0.0), (0.0, 2.0), (-3.0, 0.0), (0.0, -4.0)]);
        let ranked = rank_by_centroid(&c);
        let g = generate(&c, &GenerationSpec::new(Direction::PickupsCentral, 2)).unwrap();
        assert_eq!(g.instance.pairs(), 2);
        assert_eq!(g.metadata.dropped, None);
        let idx = |r: usize| c.points[ranked[r - 1]].index;
        // node order: depot, P1, P2, D1, D2 = ranks 1, 2, 3, 5, 4
        assert_eq!(g.metadata.node_origin, vec![idx(1), idx(2), idx(3), idx(5), idx(4)]);
        assert_eq!(g.metadata.depot, idx(1));
        assert_eq!(g.instance.capacity(), 2.0);
    }

    #[test]
    fn six_points_drop_the_middle_rank() {
        let c = line(6);
        let ranked = rank_by_centroid(&c);
        let g = generate(&c, &GenerationSpec::new(Direction::PickupsCentral, 3)).unwrap();
        assert_eq!(g.instance.pairs(), 2);
        let idx = |r: usize| c.points[ranked[r - 1]].index;
        assert_eq!(g.metadata.dropped, Some(idx(4)));
        assert_eq!(g.metadata.node_origin, vec![idx(1), idx(2), idx(3), idx(6), idx(5)]);
    }

    #[test]
    fn direction_swaps_roles_only() {
        let c = line(9);
        let a = generate(&c, &GenerationSpec::new(Direction::PickupsCentral, 4)).unwrap();
        let b = generate(&c, &GenerationSpec::new(Direction::DeliveriesCentral, 4)).unwrap();
        let n = a.instance.pairs();
        assert_eq!(a.metadata.node_origin[0], b.metadata.node_origin[0]);
        for k in 1..=n {
            assert_eq!(a.metadata.node_origin[k], b.metadata.node_origin[n + k]);
            assert_eq!(a.metadata.node_origin[n + k], b.metadata.node_origin[k]);
        }
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert_eq!(
            generate(&cloud(&[(0.0, 0.0), (1.0, 1.0)]), &GenerationSpec::new(Direction::PickupsCentral, 1)).unwrap_err(),
            GenerateError::TooFewPoints(2)
        );
        assert_eq!(
            generate(&line(5), &GenerationSpec::new(Direction::PickupsCentral, 0)).unwrap_err(),
            GenerateError::ZeroCapacity
        );
        let spec = GenerationSpec { direction: Direction::PickupsCentral, capacity_items: 1, unit_load: -1.0 };
        assert_eq!(generate(&line(5), &spec).unwrap_err(), GenerateError::BadUnitLoad);
    }

    #[test]
    fn capacity_scales_with_unit_load() {
        let spec = GenerationSpec { direction: Direction::PickupsCentral, capacity_items: 3, unit_load: 2.5 };
        let g = generate(&line(7), &spec).unwrap();
        assert_eq!(g.instance.capacity(), 7.5);
        assert_eq!(g.instance.load(1), 2.5);
        assert_eq!(g.instance.load(g.instance.pairs() + 1), -2.5);
    }

    #[test]
    fn direction_parsing() {
        assert_eq!("deliveries-central".parse::<Direction>().unwrap(), Direction::DeliveriesCentral);
        assert_eq!("PICKUPS_CENTRAL".parse::<Direction>().unwrap(), Direction::PickupsCentral);
        assert!("north".parse::<Direction>().is_err());
    }
}
