use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::geometry::{trace_geodesic, GeodesicPath, MetricField, DEFAULT_STEP};
use crate::tiling::{segment_distance, PiecewiseConstantFunction, Tiling};
use crate::transform::{triangle_lengths, BoundaryParam};
use crate::{Error, Result, Vec2};

/// Rays passing closer than this to a tiling vertex are nudged.
pub const VERTEX_CLEARANCE: f64 = 1e-7;
/// Angular nudge applied to rays through vertices.
pub const THETA_NUDGE: f64 = 1e-6;

/// One traced ray with its per-triangle Riemannian lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct TracedRay {
    pub s: f64,
    /// Angle actually traced, including any nudge.
    pub theta: f64,
    pub flagged: bool,
    pub lengths: Vec<f64>,
    pub total_length: f64,
    /// Smallest `|x|²` along the path.
    pub min_norm_sq: f64,
    /// Largest `|x|²` along the path.
    pub max_norm_sq: f64,
}

impl TracedRay {
    pub fn integral(&self, values: &[f64]) -> f64 {
        self.lengths.iter().zip(values).map(|(l, v)| l * v).sum()
    }
}

fn vertex_distance(tiling: &Tiling, path: &GeodesicPath) -> f64 {
    let mut best = f64::INFINITY;
    for v in tiling.vertices() {
        for w in path.samples.windows(2) {
            best = best.min(segment_distance(v, &w[0].point, &w[1].point));
        }
    }
    best
}

fn summarize(
    tiling: &Tiling,
    path: &GeodesicPath,
    s: f64,
    theta: f64,
    flagged: bool,
) -> Result<TracedRay> {
    let lengths = triangle_lengths(tiling, path)?;
    let norms = path.samples.iter().map(|p| p.point.norm_squared());
    let (lo, hi) = norms.fold((f64::INFINITY, 0.0f64), |(lo, hi), n| {
        (lo.min(n), hi.max(n))
    });
    Ok(TracedRay {
        s,
        theta,
        flagged,
        lengths,
        total_length: path.total_length,
        min_norm_sq: lo,
        max_norm_sq: hi,
    })
}

/// Traces the ray at boundary arclength `s` and angle `theta`.
///
/// With `nudge` set, a ray passing within [`VERTEX_CLEARANCE`] of a vertex is
/// retraced once at `theta + THETA_NUDGE` and flagged.
pub fn trace_ray(
    tiling: &Tiling,
    metric: &MetricField,
    param: &BoundaryParam,
    s: f64,
    theta: f64,
    nudge: bool,
) -> Result<TracedRay> {
    let domain = tiling.domain();
    let (x, v) = param.ray(domain, metric, s, theta);
    let path = trace_geodesic(metric, domain, x, v, DEFAULT_STEP)?;
    if nudge && vertex_distance(tiling, &path) < VERTEX_CLEARANCE {
        let theta = theta + THETA_NUDGE;
        let (x, v) = param.ray(domain, metric, s, theta);
        let path = trace_geodesic(metric, domain, x, v, DEFAULT_STEP)?;
        return summarize(tiling, &path, s, theta, true);
    }
    summarize(tiling, &path, s, theta, false)
}

/// Sampling grid `s_i = (i + ½)|∂M|/n_s`, `θ_j = (j + ½)π/n_θ`.
pub fn ray_grid(param: &BoundaryParam, n_s: usize, n_theta: usize) -> Vec<(f64, f64)> {
    let l = param.total_length();
    (0..n_s)
        .flat_map(|i| {
            (0..n_theta).map(move |j| {
                (
                    (i as f64 + 0.5) * l / n_s as f64,
                    (j as f64 + 0.5) * PI / n_theta as f64,
                )
            })
        })
        .collect()
}

/// Ray table shared by the forward transform and reconstruction.
#[derive(Clone, Debug)]
pub struct RayTable {
    pub rays: Vec<TracedRay>,
    /// Rays dropped because the geodesic was trapped.
    pub dropped: usize,
}

impl RayTable {
    /// Traces every `(s, θ)` pair in parallel; output order follows `grid`.
    pub fn trace(
        tiling: &Tiling,
        metric: &MetricField,
        param: &BoundaryParam,
        grid: &[(f64, f64)],
        nudge: bool,
    ) -> Result<Self> {
        let results: Vec<Result<TracedRay>> = grid
            .par_iter()
            .map(|&(s, theta)| trace_ray(tiling, metric, param, s, theta, nudge))
            .collect();
        let mut rays = Vec::with_capacity(results.len());
        let mut dropped = 0;
        for r in results {
            match r {
                Ok(ray) => rays.push(ray),
                Err(Error::Trapped { .. }) => dropped += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(RayTable { rays, dropped })
    }

    pub fn requested(&self) -> usize {
        self.rays.len() + self.dropped
    }

    pub fn sinogram(&self, values: &[f64]) -> Sinogram {
        Sinogram {
            rows: self
                .rays
                .iter()
                .map(|r| SinogramRow {
                    s: r.s,
                    theta: r.theta,
                    integral: r.integral(values),
                    length: r.total_length,
                    flagged: r.flagged,
                })
                .collect(),
            dropped: self.dropped,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinogramRow {
    pub s: f64,
    pub theta: f64,
    pub integral: f64,
    /// Riemannian length of the ray.
    pub length: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sinogram {
    pub rows: Vec<SinogramRow>,
    pub dropped: usize,
}

const CSV_HEADER: &str = "s,theta,I,L,flag";

impl Sinogram {
    /// CSV with 17 significant digits per float.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(96 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{}",
                r.s, r.theta, r.integral, r.length, r.flagged as u8
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            _ => {
                return Err(Error::invalid(format!(
                    "sinogram header must be `{CSV_HEADER}`"
                )))
            }
        }
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 5 {
                return Err(Error::invalid(format!(
                    "sinogram row {} has {} fields",
                    n + 1,
                    fields.len()
                )));
            }
            let num = |k: usize| -> Result<f64> {
                fields[k].parse::<f64>().map_err(|_| {
                    Error::invalid(format!(
                        "bad number `{}` in sinogram row {}",
                        fields[k],
                        n + 1
                    ))
                })
            };
            let flagged = match fields[4] {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::invalid(format!(
                        "bad flag `{other}` in sinogram row {}",
                        n + 1
                    )))
                }
            };
            rows.push(SinogramRow {
                s: num(0)?,
                theta: num(1)?,
                integral: num(2)?,
                length: num(3)?,
                flagged,
            });
        }
        Ok(Sinogram { rows, dropped: 0 })
    }

    pub fn flagged(&self) -> usize {
        self.rows.iter().filter(|r| r.flagged).count()
    }

    /// Largest excess of `|I|` over `‖f‖_∞ L`; nonpositive for a consistent sinogram.
    pub fn bound_excess(&self, max_abs: f64) -> f64 {
        self.rows
            .iter()
            .map(|r| r.integral.abs() - max_abs * r.length)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Forward transform of `f` on an `n_s × n_θ` grid.
pub fn make_sinogram(
    f: &PiecewiseConstantFunction,
    metric: &MetricField,
    n_s: usize,
    n_theta: usize,
) -> Result<Sinogram> {
    if n_s == 0 || n_theta == 0 {
        return Err(Error::invalid("sinogram grid must be nonempty"));
    }
    let tiling = f.tiling();
    let param = BoundaryParam::new(tiling.domain(), metric);
    let grid = ray_grid(&param, n_s, n_theta);
    Ok(RayTable::trace(tiling, metric, &param, &grid, true)?.sinogram(f.values()))
}

/// Boundary arclength of the boundary point `x`.
pub fn boundary_parameter_of(param: &BoundaryParam, x: &Vec2) -> f64 {
    let target = x[1].atan2(x[0]).rem_euclid(2.0 * PI);
    let (mut lo, mut hi) = (0.0, param.total_length());
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if param.angle_at(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
