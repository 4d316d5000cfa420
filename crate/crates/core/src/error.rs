use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("geodesic trapped: length {length} exceeded guard {limit}")]
    Trapped { length: f64, limit: f64 },
    #[error("start point lies outside the domain (b = {0:e})")]
    StartOutside(f64),
    #[error("start direction does not point into the domain")]
    NotInward,
    #[error("transport distance {distance} outside [0, {length}]")]
    DistanceOutOfRange { distance: f64, length: f64 },
    #[error("point is not on the boundary (b = {0:e})")]
    NotOnBoundary(f64),
    #[error("point ({0}, {1}) lies outside the tiling")]
    OutsideTiling(f64, f64),
    #[error("path leaves the tiling near ({0}, {1})")]
    PathLeavesTiling(f64, f64),
    #[error(
        "short geodesic endpoints leave the neighborhood (distance {distance}, allowed {allowed})"
    )]
    NotShort { distance: f64, allowed: f64 },
    #[error("direction is {angle} rad from the inward normal, beyond the admissible {max}")]
    NotAdmissible { angle: f64, max: f64 },
    #[error("probe line is degenerate: 1 - alpha*t = {0} <= 0")]
    ProbeDegenerate(f64),
    #[error("alphas must be strictly decreasing")]
    AlphasNotDescending,
    #[error("linear system is singular")]
    SingularSystem,
    #[error("stencil node t = {0} violates the probe condition")]
    StencilInvalid(f64),
    #[error("a fan sector boundary is parallel to the probe line")]
    TangentialSector,
    #[error("cone sector has zero angular width")]
    DegenerateCone,
    #[error("layer {level} (T = {value}) is underdetermined for triangles {triangles:?}")]
    UnderdeterminedLayer {
        level: usize,
        value: f64,
        triangles: Vec<usize>,
    },
    #[error("foliation convexity check failed (min second derivative {0:e})")]
    ConvexityCheckFailed(f64),
    #[error("least-squares system is rank deficient (condition {0:e})")]
    RankDeficient(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
