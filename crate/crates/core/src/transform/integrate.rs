use crate::geometry::GeodesicPath;
use crate::tiling::{PiecewiseConstantFunction, Tiling};
use crate::{Error, Result};

/// Bisection resolution on the segment fraction.
const CROSSING_TOL: f64 = 1e-13;
/// Offset past a crossing where the next triangle is identified.
const PROBE: f64 = 1e-12;
/// A sample further than this outside every triangle is off the tiling.
const LEAVE_TOL: f64 = 1e-9;
/// Margin slack at segment ends.
const END_TOL: f64 = 1e-12;
/// Crossings allowed within a single integrator segment.
const MAX_CROSSINGS: usize = 32;

/// Triangle with the largest margin at fraction `tau` of segment `k`,
/// skipping `exclude`.
fn pick(
    tiling: &Tiling,
    path: &GeodesicPath,
    k: usize,
    tau: f64,
    exclude: Option<usize>,
) -> Result<usize> {
    let x = path.interpolate(k, (tau + PROBE).min(1.0));
    let (mut best, mut best_m) = (None, f64::NEG_INFINITY);
    for t in 0..tiling.len() {
        if Some(t) == exclude {
            continue;
        }
        let m = tiling.margin(t, &x);
        if m > best_m {
            best = Some(t);
            best_m = m;
        }
    }
    match best {
        Some(t) if best_m >= -LEAVE_TOL => Ok(t),
        _ => Err(Error::PathLeavesTiling(x[0], x[1])),
    }
}

/// Riemannian length of the path inside each triangle.
///
/// Walks the integrator segments; whenever a segment end leaves the current
/// triangle the crossing is located by bisection on that triangle's margin
/// along the Hermite interpolant of the segment.
pub fn triangle_lengths(tiling: &Tiling, path: &GeodesicPath) -> Result<Vec<f64>> {
    let mut lengths = vec![0.0; tiling.len()];
    let mut current: Option<usize> = None;
    for k in 0..path.samples.len() - 1 {
        let ds = path.samples[k + 1].arclength - path.samples[k].arclength;
        let end = path.samples[k + 1].point;
        let mut tau = 0.0;
        for crossing in 0..=MAX_CROSSINGS {
            let c = match current {
                Some(c) => c,
                None => pick(tiling, path, k, tau, None)?,
            };
            current = Some(c);
            if crossing == MAX_CROSSINGS || tiling.margin(c, &end) >= -END_TOL {
                lengths[c] += (1.0 - tau) * ds;
                break;
            }
            let (mut lo, mut hi) = (tau, 1.0);
            while hi - lo > CROSSING_TOL {
                let mid = 0.5 * (lo + hi);
                if tiling.margin(c, &path.interpolate(k, mid)) >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lengths[c] += (hi - tau) * ds;
            tau = hi;
            current = Some(pick(tiling, path, k, tau, Some(c))?);
        }
    }
    Ok(lengths)
}

/// `∫_γ f ds` for a piecewise constant `f`.
pub fn integrate_along(f: &PiecewiseConstantFunction, path: &GeodesicPath) -> Result<f64> {
    let lengths = triangle_lengths(f.tiling(), path)?;
    Ok(lengths.iter().zip(f.values()).map(|(l, v)| l * v).sum())
}
