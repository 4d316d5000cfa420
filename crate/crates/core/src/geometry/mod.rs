//! Conformal metrics on planar charts, convex domains and geodesics.

mod convexity;
mod domain;
mod geodesic;
mod metric;

pub use convexity::{
    check_strictly_convex, min_boundary_curvature, ConvexityReport, FoliationFunction,
    FoliationSpec,
};
pub use domain::{
    boundary_normal, second_fundamental_form, Domain, DomainKind, DomainSpec, PolyTerm,
};
pub(crate) use geodesic::flow;
pub use geodesic::{
    parallel_transport, trace_geodesic, GeodesicPath, PathSample, BOUNDARY_TOL, DEFAULT_STEP,
};
pub use metric::{Christoffel, MetricField, MetricSpec};

/// Free geodesic flow for Riemannian length `length` (negative runs backwards),
/// ignoring the domain boundary. Returns the final point and unit velocity.
pub fn geodesic_flow(
    metric: &MetricField,
    x: crate::Vec2,
    v: crate::Vec2,
    length: f64,
    step: f64,
) -> (crate::Vec2, crate::Vec2) {
    let (x, v, _) = flow(metric, x, v, None, length, step);
    (x, v)
}

/// Parallel transport of `w` along the free geodesic from `(x, v)` over `length`.
/// Returns the end point, end velocity and transported vector.
pub fn transport_along(
    metric: &MetricField,
    x: crate::Vec2,
    v: crate::Vec2,
    w: crate::Vec2,
    length: f64,
    step: f64,
) -> (crate::Vec2, crate::Vec2, crate::Vec2) {
    let (x, v, w) = flow(metric, x, v, Some(w), length, step);
    (x, v, w.unwrap())
}
