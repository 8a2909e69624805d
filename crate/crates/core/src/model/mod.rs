//! Problem data model: instances, tours, payload profiles and the feasibility validator.

mod instance;
mod tour;
mod validate;

pub use instance::{Instance, MetricMode, ModelError, NodeId, NodeRole, Point};
pub use tour::{payload_profile, tour_cost, PayloadProfile, Tour};
pub use validate::{validate, validate_sequence, ValidationReport, Violation, ViolationKind};
