use crate::geometry::{
    boundary_normal, trace_geodesic, transport_along, Domain, GeodesicPath, MetricField,
    BOUNDARY_TOL, DEFAULT_STEP,
};
use crate::tiling::PiecewiseConstantFunction;
use crate::transform::integrate_along;
use crate::{Error, Result, Vec2};

/// Controls for the short geodesics `γ_{v,h}` near a boundary point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShortGeodesicParams {
    /// Chart step of the geodesic integrator.
    pub step: f64,
    /// Endpoints must lie within `neighborhood · √h` (chart distance) of the base point.
    pub neighborhood: f64,
    /// Largest angle between `v` and the inward normal, in radians.
    pub max_tilt: f64,
}

impl Default for ShortGeodesicParams {
    fn default() -> Self {
        ShortGeodesicParams {
            step: DEFAULT_STEP,
            neighborhood: 4.0,
            max_tilt: std::f64::consts::FRAC_PI_3,
        }
    }
}

/// Unit inward `v` and its orthogonal `w` at a boundary point, with `w`
/// oriented along the counterclockwise boundary tangent.
fn frame(
    metric: &MetricField,
    domain: &Domain,
    x: &Vec2,
    v: &Vec2,
    max_tilt: f64,
) -> Result<(Vec2, Vec2)> {
    let nu = boundary_normal(domain, metric, x)?;
    let v = metric.normalize(x, v);
    let angle = (nu.dot(&v) / (nu.norm() * v.norm()))
        .clamp(-1.0, 1.0)
        .acos();
    if !(angle <= max_tilt) {
        return Err(Error::NotAdmissible {
            angle,
            max: max_tilt,
        });
    }
    let mut w = Vec2::new(-v[1], v[0]);
    if w.dot(&domain.boundary_tangent(x)) < 0.0 {
        w = -w;
    }
    Ok((v, w))
}

/// The geodesic through `exp_x(h v)` with direction the parallel transport of
/// `v^⊥`, traced in both directions to the boundary.
pub fn gamma_vh(
    metric: &MetricField,
    domain: &Domain,
    x: &Vec2,
    v: &Vec2,
    h: f64,
    params: &ShortGeodesicParams,
) -> Result<GeodesicPath> {
    if !(h > 0.0) {
        return Err(Error::invalid("h must be positive"));
    }
    let (v, w) = frame(metric, domain, x, v, params.max_tilt)?;
    let inner = params.step.min(h / 16.0);
    let (p, _, wh) = transport_along(metric, *x, v, w, h, inner);
    let allowed = params.neighborhood * h.sqrt();
    if domain.b(&p) >= -BOUNDARY_TOL {
        return Err(Error::NotShort {
            distance: f64::INFINITY,
            allowed,
        });
    }
    let path = trace_geodesic(metric, domain, p, wh, params.step.min(h / 4.0))?;
    let distance = (path.entry_point - x)
        .norm()
        .max((path.exit_point - x).norm());
    if distance > allowed {
        return Err(Error::NotShort { distance, allowed });
    }
    Ok(path)
}

/// The family `h ↦ γ_{v,h}` at a fixed boundary point and direction.
#[derive(Clone, Debug)]
pub struct RayFamily {
    pub base: Vec2,
    pub direction: Vec2,
    pub h: Vec<f64>,
    pub paths: Vec<GeodesicPath>,
}

impl RayFamily {
    pub fn new(
        metric: &MetricField,
        domain: &Domain,
        x: &Vec2,
        v: &Vec2,
        h: &[f64],
        params: &ShortGeodesicParams,
    ) -> Result<Self> {
        let paths = h
            .iter()
            .map(|&h| gamma_vh(metric, domain, x, v, h, params))
            .collect::<Result<Vec<_>>>()?;
        Ok(RayFamily {
            base: *x,
            direction: *v,
            h: h.to_vec(),
            paths,
        })
    }

    /// `I(γ_{v,h}) / h` for each member.
    pub fn scaled_integrals(&self, f: &PiecewiseConstantFunction) -> Result<Vec<f64>> {
        self.paths
            .iter()
            .zip(&self.h)
            .map(|(p, &h)| Ok(integrate_along(f, p)? / h))
            .collect()
    }

    /// Largest chart distance from the base point to an endpoint, per member.
    pub fn endpoint_spread(&self) -> Vec<f64> {
        self.paths
            .iter()
            .map(|p| {
                (p.entry_point - self.base)
                    .norm()
                    .max((p.exit_point - self.base).norm())
            })
            .collect()
    }
}
