//! Toolkit for the multi-commodity one-to-one pickup-and-delivery traveling salesman
//! problem: a single capacitated agent moves `n` distinct items from their pickup to
//! their delivery locations in one closed tour.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at the crate
//! root fix the scalar to `f64`.

pub mod bench;
pub mod exact;
pub mod format;
pub mod generate;
pub mod heuristic;
pub mod model;
pub mod scalar;
pub mod tsplib;

pub use generate::{Direction, GenerationSpec};
pub use heuristic::InitPolicy;
pub use model::{MetricMode, NodeId, NodeRole, ValidationReport, Violation, ViolationKind};
pub use scalar::Scalar;
pub use tsplib::DistanceKind;

pub type Instance = model::Instance<f64>;
pub type Tour = model::Tour<f64>;
pub type PayloadProfile = model::PayloadProfile<f64>;
pub type Point = model::Point<f64>;
pub type PointCloud = tsplib::PointCloud<f64>;
pub type MultiStart = heuristic::MultiStart<f64>;
pub type ExactOutcome = exact::ExactOutcome<f64>;

pub type InstanceF32 = model::Instance<f32>;
pub type TourF32 = model::Tour<f32>;
