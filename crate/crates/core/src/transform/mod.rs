//! The geodesic X-ray transform of piecewise constant functions.

mod boundary;
mod integrate;
mod rays;
mod sinogram;

pub use boundary::BoundaryParam;
pub use integrate::{integrate_along, triangle_lengths};
pub use rays::{gamma_vh, RayFamily, ShortGeodesicParams};
pub use sinogram::{
    boundary_parameter_of, make_sinogram, ray_grid, trace_ray, RayTable, Sinogram, SinogramRow,
    TracedRay, THETA_NUDGE, VERTEX_CLEARANCE,
};
