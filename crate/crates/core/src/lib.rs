//! Geodesic X-ray transform of piecewise constant functions on planar
//! Riemannian surfaces with strictly convex boundary.
//!
//! The crate is organized bottom-up:
//!
//! - [`geometry`]: conformal metrics on a planar chart, convex domains, geodesic
//!   tracing, parallel transport and convexity checks.
//! - [`tiling`]: regular triangulations with straight interior edges and
//!   boundary arcs, point location, depth and tangent fans.
//! - [`transform`]: forward transform along geodesics, sinograms and the
//!   short-geodesic ray families used at boundary corners.
//! - [`conemodel`]: the flat half-plane model with conical functions and the
//!   differenced Vandermonde system.
//! - [`recover`]: corner limits, simplex classification and layer-stripping
//!   reconstruction.

// Guards written as `!(x > 0.0)` deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conemodel;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod recover;
pub mod scene;
pub mod tiling;
pub mod transform;

pub use error::{Error, Result};

/// Chart points and chart vectors.
pub type Vec2 = nalgebra::Vector2<f64>;
