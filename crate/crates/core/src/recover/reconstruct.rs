use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{check_strictly_convex, FoliationFunction, MetricField};
use crate::recover::{layer_schedule, LayerSchedule};
use crate::tiling::Tiling;
use crate::transform::{ray_grid, BoundaryParam, RayTable, Sinogram, TracedRay};
use crate::{Error, Result};

/// Path lengths at or below this count as a miss.
const HIT_TOL: f64 = 1e-12;
/// Singular values below this fraction of the largest are treated as zero.
const RANK_TOL: f64 = 1e-12;

/// Thresholds for the layer-by-layer solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LayerOptions {
    /// Rays that must hit each unknown triangle.
    pub min_rays: usize,
    /// Total in-triangle length each unknown triangle must receive.
    pub min_length: f64,
    /// Random geodesics used to certify convexity of `φ`.
    pub convexity_trials: usize,
    pub seed: u64,
}

impl Default for LayerOptions {
    fn default() -> Self {
        LayerOptions {
            min_rays: 3,
            min_length: 1e-3,
            convexity_trials: 64,
            seed: 0,
        }
    }
}

/// Diagnostics for one solved level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerReport {
    pub level: usize,
    pub value: f64,
    pub triangles: Vec<usize>,
    pub rays: usize,
    pub condition: f64,
    pub residual_norm: f64,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reconstruction {
    pub values: Vec<f64>,
    pub layers: Vec<LayerReport>,
    /// `‖L·values − I‖₂` over all rows.
    pub residual_norm: f64,
}

/// Smallest `φ` along a traced ray.
pub fn path_min_phi(phi: &FoliationFunction, ray: &TracedRay) -> f64 {
    if phi.scale >= 0.0 {
        phi.scale * ray.min_norm_sq
    } else {
        phi.scale * ray.max_norm_sq
    }
}

/// Retraces the rows of a sinogram without nudging, reproducing the paths
/// that generated it.
pub fn retrace(sino: &Sinogram, tiling: &Tiling, metric: &MetricField) -> Result<RayTable> {
    let param = BoundaryParam::new(tiling.domain(), metric);
    let grid: Vec<(f64, f64)> = sino.rows.iter().map(|r| (r.s, r.theta)).collect();
    let table = RayTable::trace(tiling, metric, &param, &grid, false)?;
    if table.dropped > 0 {
        return Err(Error::Trapped {
            length: f64::INFINITY,
            limit: f64::INFINITY,
        });
    }
    Ok(table)
}

fn integrals(sino: &Sinogram) -> Vec<f64> {
    sino.rows.iter().map(|r| r.integral).collect()
}

/// Least-squares solve with an SVD, returning the solution and the 2-norm
/// condition number.
fn lsq(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<(DVector<f64>, f64)> {
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (max, min) = (sv.max(), sv.min());
    if sv.len() < a.ncols() || !(min > RANK_TOL * max) {
        return None;
    }
    let x = svd.solve(b, 0.0).ok()?;
    Some((x, max / min))
}

fn residual_norm(table: &RayTable, data: &[f64], values: &[f64]) -> f64 {
    table
        .rays
        .iter()
        .zip(data)
        .map(|(r, i)| (r.integral(values) - i).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Layer stripping on precomputed rays: levels are solved outermost first,
/// each from the rays that stay above the next level of `φ`.
pub fn layer_strip_solve(
    table: &RayTable,
    data: &[f64],
    tiling: &Tiling,
    phi: &FoliationFunction,
    schedule: &LayerSchedule,
    opts: &LayerOptions,
) -> Result<Reconstruction> {
    let n = tiling.len();
    let level_of = schedule.level_of(n);
    let min_phi: Vec<f64> = table.rays.iter().map(|r| path_min_phi(phi, r)).collect();
    let mut values = vec![0.0; n];
    let mut layers = Vec::with_capacity(schedule.len());
    for (j, group) in schedule.groups.iter().enumerate() {
        let threshold = schedule
            .levels
            .get(j + 1)
            .copied()
            .unwrap_or(f64::NEG_INFINITY);
        let rows: Vec<usize> = (0..table.rays.len())
            .filter(|&r| {
                min_phi[r] > threshold
                    && table.rays[r]
                        .lengths
                        .iter()
                        .enumerate()
                        .all(|(t, l)| level_of[t] <= j || *l <= HIT_TOL)
            })
            .collect();
        let uncovered: Vec<usize> = group
            .iter()
            .copied()
            .filter(|&t| {
                let hits = rows
                    .iter()
                    .filter(|&&r| table.rays[r].lengths[t] > HIT_TOL)
                    .count();
                let total: f64 = rows.iter().map(|&r| table.rays[r].lengths[t]).sum();
                hits < opts.min_rays || total < opts.min_length
            })
            .collect();
        if !uncovered.is_empty() {
            return Err(Error::UnderdeterminedLayer {
                level: j,
                value: schedule.levels[j],
                triangles: uncovered,
            });
        }
        let a = DMatrix::from_fn(rows.len(), group.len(), |r, c| {
            table.rays[rows[r]].lengths[group[c]]
        });
        let b = DVector::from_iterator(
            rows.len(),
            rows.iter().map(|&r| {
                let known: f64 = table.rays[r]
                    .lengths
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| level_of[*t] < j)
                    .map(|(t, l)| l * values[t])
                    .sum();
                data[r] - known
            }),
        );
        let (x, condition) = lsq(&a, &b).ok_or(Error::UnderdeterminedLayer {
            level: j,
            value: schedule.levels[j],
            triangles: group.clone(),
        })?;
        for (c, &t) in group.iter().enumerate() {
            values[t] = x[c];
        }
        layers.push(LayerReport {
            level: j,
            value: schedule.levels[j],
            triangles: group.clone(),
            rays: rows.len(),
            condition,
            residual_norm: (&a * &x - &b).norm(),
            values: x.iter().copied().collect(),
        });
    }
    let residual_norm = residual_norm(table, data, &values);
    Ok(Reconstruction {
        values,
        layers,
        residual_norm,
    })
}

/// One least-squares solve over all rows and all triangles.
pub fn global_lsq_solve(table: &RayTable, data: &[f64], tiling: &Tiling) -> Result<Reconstruction> {
    let n = tiling.len();
    let a = DMatrix::from_fn(table.rays.len(), n, |r, t| table.rays[r].lengths[t]);
    let b = DVector::from_column_slice(data);
    let svd = a.clone().svd(false, false);
    let sv = &svd.singular_values;
    if sv.len() < n || !(sv.min() > RANK_TOL * sv.max()) {
        return Err(Error::RankDeficient(if sv.len() < n {
            0.0
        } else {
            sv.min() / sv.max()
        }));
    }
    let (x, condition) = lsq(&a, &b).ok_or(Error::RankDeficient(0.0))?;
    let values: Vec<f64> = x.iter().copied().collect();
    let residual_norm = residual_norm(table, data, &values);
    Ok(Reconstruction {
        layers: vec![LayerReport {
            level: 0,
            value: f64::NAN,
            triangles: (0..n).collect(),
            rays: table.rays.len(),
            condition,
            residual_norm,
            values: values.clone(),
        }],
        values,
        residual_norm,
    })
}

fn certify_convex(
    metric: &MetricField,
    tiling: &Tiling,
    phi: &FoliationFunction,
    opts: &LayerOptions,
) -> Result<()> {
    let report = check_strictly_convex(
        metric,
        tiling.domain(),
        phi,
        opts.convexity_trials,
        opts.seed,
    )?;
    if !report.passed {
        return Err(Error::ConvexityCheckFailed(report.min_second_derivative));
    }
    Ok(())
}

/// Layer-stripping reconstruction of the triangle values from a sinogram.
pub fn layer_strip_reconstruct(
    sino: &Sinogram,
    tiling: &Tiling,
    metric: &MetricField,
    phi: &FoliationFunction,
    opts: &LayerOptions,
) -> Result<Reconstruction> {
    certify_convex(metric, tiling, phi, opts)?;
    let table = retrace(sino, tiling, metric)?;
    layer_strip_solve(
        &table,
        &integrals(sino),
        tiling,
        phi,
        &layer_schedule(phi, tiling),
        opts,
    )
}

/// Single least-squares reconstruction over the whole sinogram.
pub fn global_lsq_reconstruct(
    sino: &Sinogram,
    tiling: &Tiling,
    metric: &MetricField,
) -> Result<Reconstruction> {
    let table = retrace(sino, tiling, metric)?;
    global_lsq_solve(&table, &integrals(sino), tiling)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub layer_error: f64,
    pub global_error: f64,
    /// Largest componentwise difference between the two reconstructions.
    pub disagreement: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InjectivityReport {
    pub rays: usize,
    pub dropped: usize,
    pub trials: Vec<TrialRecord>,
    /// Largest reconstructed magnitude from the zero sinogram, over both methods.
    pub zero_data_max: f64,
    /// Largest `|I|` produced by the two-triangle `±1` function.
    pub adversarial_max_integral: f64,
    pub tolerance: f64,
    /// Error messages from failed reconstructions.
    pub failures: Vec<String>,
}

impl InjectivityReport {
    pub fn max_error(&self) -> f64 {
        self.trials
            .iter()
            .map(|t| t.layer_error.max(t.global_error).max(t.disagreement))
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.max_error() <= self.tolerance
            && self.zero_data_max <= 1e-9
            && self.adversarial_max_integral > 0.0
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Round-trip check: random values are forwarded and reconstructed by both
/// methods on an `n_s × n_θ` ray grid.
#[allow(clippy::too_many_arguments)]
pub fn verify_injectivity(
    tiling: &Tiling,
    metric: &MetricField,
    phi: &FoliationFunction,
    trials: usize,
    seed: u64,
    n_s: usize,
    n_theta: usize,
    opts: &LayerOptions,
) -> Result<InjectivityReport> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    certify_convex(metric, tiling, phi, opts)?;
    let param = BoundaryParam::new(tiling.domain(), metric);
    let table = RayTable::trace(
        tiling,
        metric,
        &param,
        &ray_grid(&param, n_s, n_theta),
        true,
    )?;
    let schedule = layer_schedule(phi, tiling);
    let n = tiling.len();
    let mut failures = Vec::new();
    let solve_both = |values: &[f64], failures: &mut Vec<String>| -> Option<(Vec<f64>, Vec<f64>)> {
        let data: Vec<f64> = table.rays.iter().map(|r| r.integral(values)).collect();
        let layer = layer_strip_solve(&table, &data, tiling, phi, &schedule, opts);
        let global = global_lsq_solve(&table, &data, tiling);
        match (layer, global) {
            (Ok(l), Ok(g)) => Some((l.values, g.values)),
            (l, g) => {
                for e in [l.err(), g.err()].into_iter().flatten() {
                    failures.push(e.to_string());
                }
                None
            }
        }
    };

    let zero = vec![0.0; n];
    let zero_data_max = solve_both(&zero, &mut failures)
        .map(|(l, g)| l.iter().chain(&g).fold(0.0f64, |m, v| m.max(v.abs())))
        .unwrap_or(f64::INFINITY);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(trials);
    for trial in 0..trials {
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        if let Some((l, g)) = solve_both(&values, &mut failures) {
            records.push(TrialRecord {
                trial,
                layer_error: max_diff(&l, &values),
                global_error: max_diff(&g, &values),
                disagreement: max_diff(&l, &g),
            });
        }
    }

    let mut adversarial = vec![0.0; n];
    adversarial[0] = 1.0;
    adversarial[n - 1] = -1.0;
    let adversarial_max_integral = table
        .rays
        .iter()
        .map(|r| r.integral(&adversarial).abs())
        .fold(0.0, f64::max);

    Ok(InjectivityReport {
        rays: table.rays.len(),
        dropped: table.dropped,
        trials: records,
        zero_data_max,
        adversarial_max_integral,
        tolerance: 1e-6,
        failures,
    })
}
