//! Fixed-step RK4 integration of the geodesic and parallel-transport equations.

use crate::geometry::{Domain, MetricField};
use crate::{Error, Result, Vec2};

/// Default chart step of the geodesic integrator.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Boundary tolerance for points that count as lying on `∂M`.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Exit localization target for `|b|`.
const EXIT_TOL: f64 = 1e-12;

/// Length cap in multiples of the chart diameter.
const TRAP_FACTOR: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathSample {
    pub point: Vec2,
    /// Chart velocity with unit Riemannian speed.
    pub velocity: Vec2,
    /// Riemannian arclength from the entry point.
    pub arclength: f64,
}

/// A maximal unit-speed geodesic from boundary to boundary.
#[derive(Clone, Debug)]
pub struct GeodesicPath {
    pub samples: Vec<PathSample>,
    pub total_length: f64,
    pub entry_point: Vec2,
    pub exit_point: Vec2,
}

impl GeodesicPath {
    fn from_samples(samples: Vec<PathSample>) -> Self {
        let first = samples[0];
        let last = *samples.last().unwrap();
        GeodesicPath {
            total_length: last.arclength,
            entry_point: first.point,
            exit_point: last.point,
            samples,
        }
    }

    pub fn entry_velocity(&self) -> Vec2 {
        self.samples[0].velocity
    }

    pub fn exit_velocity(&self) -> Vec2 {
        self.samples.last().unwrap().velocity
    }

    /// Cubic Hermite position on segment `k` at fraction `tau` of its length.
    pub fn interpolate(&self, k: usize, tau: f64) -> Vec2 {
        let a = &self.samples[k];
        let b = &self.samples[k + 1];
        let ds = b.arclength - a.arclength;
        let t2 = tau * tau;
        let t3 = t2 * tau;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + tau;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        a.point * h00 + a.velocity * (h10 * ds) + b.point * h01 + b.velocity * (h11 * ds)
    }

    /// The same geodesic traversed from exit to entry.
    pub fn reversed(&self) -> GeodesicPath {
        let total = self.total_length;
        let samples = self
            .samples
            .iter()
            .rev()
            .map(|s| PathSample {
                point: s.point,
                velocity: -s.velocity,
                arclength: total - s.arclength,
            })
            .collect();
        GeodesicPath::from_samples(samples)
    }

    /// Largest deviation of the Riemannian speed from one.
    pub fn max_speed_defect(&self, metric: &MetricField) -> f64 {
        self.samples
            .iter()
            .map(|s| (metric.norm(&s.point, &s.velocity) - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// One classical RK4 step of the geodesic equation over Riemannian length `ds`.
pub(crate) fn rk4_step(metric: &MetricField, x: &Vec2, v: &Vec2, ds: f64) -> (Vec2, Vec2) {
    let k1x = *v;
    let k1v = metric.acceleration(x, v);
    let x2 = x + k1x * (0.5 * ds);
    let v2 = v + k1v * (0.5 * ds);
    let k2x = v2;
    let k2v = metric.acceleration(&x2, &v2);
    let x3 = x + k2x * (0.5 * ds);
    let v3 = v + k2v * (0.5 * ds);
    let k3x = v3;
    let k3v = metric.acceleration(&x3, &v3);
    let x4 = x + k3x * ds;
    let v4 = v + k3v * ds;
    let k4x = v4;
    let k4v = metric.acceleration(&x4, &v4);
    let xn = x + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (ds / 6.0);
    let vn = v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (ds / 6.0);
    let vn = metric.normalize(&xn, &vn);
    (xn, vn)
}

/// RK4 step for the coupled geodesic and parallel-transport system.
pub(crate) fn rk4_transport_step(
    metric: &MetricField,
    x: &Vec2,
    v: &Vec2,
    w: &Vec2,
    ds: f64,
) -> (Vec2, Vec2, Vec2) {
    let f = |x: &Vec2, v: &Vec2, w: &Vec2| {
        (
            *v,
            metric.acceleration(x, v),
            metric.transport_rate(x, v, w),
        )
    };
    let (k1x, k1v, k1w) = f(x, v, w);
    let h = 0.5 * ds;
    let (k2x, k2v, k2w) = f(&(x + k1x * h), &(v + k1v * h), &(w + k1w * h));
    let (k3x, k3v, k3w) = f(&(x + k2x * h), &(v + k2v * h), &(w + k2w * h));
    let (k4x, k4v, k4w) = f(&(x + k3x * ds), &(v + k3v * ds), &(w + k3w * ds));
    let c = ds / 6.0;
    let xn = x + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * c;
    let vn = v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * c;
    let wn = w + (k1w + k2w * 2.0 + k3w * 2.0 + k4w) * c;
    (xn, metric.normalize(&xn, &vn), wn)
}

/// Follows the geodesic from `(x, v)` for Riemannian length `length`, ignoring
/// the domain, optionally transporting `w` along.
pub(crate) fn flow(
    metric: &MetricField,
    x: Vec2,
    v: Vec2,
    w: Option<Vec2>,
    length: f64,
    step: f64,
) -> (Vec2, Vec2, Option<Vec2>) {
    let (mut x, mut v, mut w) = (x, metric.normalize(&x, &v), w);
    let sign = length.signum();
    let mut remaining = length.abs();
    if sign < 0.0 {
        v = -v;
    }
    while remaining > 0.0 {
        let ds = (step * metric.scale(&x)).min(remaining);
        match w {
            Some(wv) => {
                let (xn, vn, wn) = rk4_transport_step(metric, &x, &v, &wv, ds);
                x = xn;
                v = vn;
                w = Some(wn);
            }
            None => {
                let (xn, vn) = rk4_step(metric, &x, &v, ds);
                x = xn;
                v = vn;
            }
        }
        remaining -= ds;
    }
    if sign < 0.0 {
        v = -v;
    }
    (x, v, w)
}

/// Integrates forward from `x` with unit velocity `v` until the boundary.
fn trace_to_boundary(
    metric: &MetricField,
    domain: &Domain,
    x: Vec2,
    v: Vec2,
    step: f64,
) -> Result<Vec<PathSample>> {
    let limit = TRAP_FACTOR * domain.diameter();
    let mut samples = vec![PathSample {
        point: x,
        velocity: v,
        arclength: 0.0,
    }];
    let (mut x, mut v, mut s) = (x, v, 0.0);
    loop {
        let ds = step * metric.scale(&x);
        let (xn, vn) = rk4_step(metric, &x, &v, ds);
        if domain.b(&xn) > 0.0 {
            let (h, xe, ve) = localize_exit(metric, domain, &x, &v, ds);
            if h > 1e-14 {
                samples.push(PathSample {
                    point: xe,
                    velocity: ve,
                    arclength: s + h,
                });
            } else if samples.len() > 1 {
                samples.pop();
                samples.push(PathSample {
                    point: x,
                    velocity: v,
                    arclength: s,
                });
            } else {
                return Err(Error::NotInward);
            }
            return Ok(samples);
        }
        x = xn;
        v = vn;
        s += ds;
        samples.push(PathSample {
            point: x,
            velocity: v,
            arclength: s,
        });
        if s > limit {
            return Err(Error::Trapped { length: s, limit });
        }
    }
}

/// Bisection on the RK4 step length until the endpoint sits on `b = 0`.
fn localize_exit(
    metric: &MetricField,
    domain: &Domain,
    x: &Vec2,
    v: &Vec2,
    ds: f64,
) -> (f64, Vec2, Vec2) {
    let (mut lo, mut hi) = (0.0, ds);
    let mut best = (0.0, *x, *v);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (xm, vm) = rk4_step(metric, x, v, mid);
        let bm = domain.b(&xm);
        best = (mid, xm, vm);
        if bm.abs() <= EXIT_TOL || hi - lo < 1e-16 {
            break;
        }
        if bm > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    best
}

/// Traces the maximal geodesic through `start` in chart direction `direction`.
///
/// A start on the boundary must point strictly inward and yields a path that
/// begins there. An interior start is traced both ways and stitched, so the
/// returned path runs from entry to exit through `start`.
pub fn trace_geodesic(
    metric: &MetricField,
    domain: &Domain,
    start: Vec2,
    direction: Vec2,
    step: f64,
) -> Result<GeodesicPath> {
    if !(step > 0.0) || direction.norm() == 0.0 {
        return Err(Error::invalid("step and direction must be nonzero"));
    }
    let b0 = domain.b(&start);
    if b0 > BOUNDARY_TOL {
        return Err(Error::StartOutside(b0));
    }
    let v = metric.normalize(&start, &direction);
    if b0.abs() <= BOUNDARY_TOL {
        if domain.gradient(&start).dot(&v) >= 0.0 {
            return Err(Error::NotInward);
        }
        let samples = trace_to_boundary(metric, domain, start, v, step)?;
        return Ok(GeodesicPath::from_samples(samples));
    }
    let back = trace_to_boundary(metric, domain, start, -v, step)?;
    let fwd = trace_to_boundary(metric, domain, start, v, step)?;
    let back_len = back.last().unwrap().arclength;
    let mut samples: Vec<PathSample> = back
        .iter()
        .rev()
        .map(|s| PathSample {
            point: s.point,
            velocity: -s.velocity,
            arclength: back_len - s.arclength,
        })
        .collect();
    samples.extend(fwd.iter().skip(1).map(|s| PathSample {
        arclength: s.arclength + back_len,
        ..*s
    }));
    let total = samples.last().unwrap().arclength;
    let limit = TRAP_FACTOR * domain.diameter();
    if total > limit {
        return Err(Error::Trapped {
            length: total,
            limit,
        });
    }
    Ok(GeodesicPath::from_samples(samples))
}

/// Parallel transport of `w` (tangent at the path start) for Riemannian
/// length `distance` along the path.
pub fn parallel_transport(
    metric: &MetricField,
    path: &GeodesicPath,
    w: Vec2,
    distance: f64,
) -> Result<Vec2> {
    if !(0.0..=path.total_length).contains(&distance) {
        return Err(Error::DistanceOutOfRange {
            distance,
            length: path.total_length,
        });
    }
    let first = path.samples[0];
    let (mut x, mut v, mut w) = (first.point, first.velocity, w);
    for pair in path.samples.windows(2) {
        let (a, b) = (pair[0].arclength, pair[1].arclength);
        if a >= distance {
            break;
        }
        let ds = b.min(distance) - a;
        let (xn, vn, wn) = rk4_transport_step(metric, &x, &v, &w, ds);
        w = wn;
        if b <= distance {
            x = pair[1].point;
            v = pair[1].velocity;
        } else {
            x = xn;
            v = vn;
        }
    }
    Ok(w)
}
