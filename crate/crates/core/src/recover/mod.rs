//! Corner limits, simplex classification and layer-stripping reconstruction.

mod classify;
mod corner;
mod layers;
mod reconstruct;

pub use classify::{classify_sector, classify_sector_vectors, classify_simplex_types, SimplexType};
pub use corner::{corner_limit, richardson, tangent_sector_integral, CornerProbeResult};
pub use layers::{layer_schedule, triangle_max, LayerSchedule};
pub use reconstruct::{
    global_lsq_reconstruct, global_lsq_solve, layer_strip_reconstruct, layer_strip_solve,
    path_min_phi, retrace, verify_injectivity, InjectivityReport, LayerOptions, LayerReport,
    Reconstruction, TrialRecord,
};
