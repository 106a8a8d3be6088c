//! Free-boundary curve shortening flow in convex planar domains.

pub mod billiard;
pub mod chord_arc;
pub mod curve;
pub mod domain;
pub mod error;
pub mod flow;
pub mod initial;
mod optimize;
pub mod scalar;
mod spline;
pub mod vec2;
pub mod verification;

pub use domain::{AngleData, BoundaryFrame, ConvexDomain as GenericDomain, DomainKind};
pub use error::{Error, Result};
pub use scalar::Real;
pub use vec2::Vec2;

/// Double-precision domain.
pub type ConvexDomain = domain::ConvexDomain<f64>;
/// Double-precision point.
pub type Point = Vec2<f64>;
pub type DiscreteCurve = curve::DiscreteCurve<f64>;
pub type ComparisonFunction = chord_arc::ComparisonFunction<f64>;
pub type FlowConfig = flow::FlowConfig<f64>;
pub type FlowTrace = flow::FlowTrace<f64>;
pub type ProfileReport = chord_arc::ProfileReport<f64>;
pub type CheckReport = verification::CheckReport<f64>;
