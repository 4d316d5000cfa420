//! Acceptance suite: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xrt_core::conemodel::{
    cone_line_integral, kernel_taylor_coefficients, recover_cone_values, vandermonde_det,
    vandermonde_det_lu, ConeSpec, LineProbe,
};
use xrt_core::fixtures::{
    conformal_scene, euclidean_scene, single_ring_tiling, t_junction, two_ring_tiling,
    wedge_tiling, wedge_values, WEDGE_CORNER,
};
use xrt_core::geometry::{boundary_normal, trace_geodesic, Domain, MetricField, DEFAULT_STEP};
use xrt_core::recover::{
    corner_limit, layer_schedule, layer_strip_solve, verify_injectivity, LayerOptions,
};
use xrt_core::scene::Scene;
use xrt_core::tiling::{validate_tiling, PiecewiseConstantFunction, Tiling, ViolationKind};
use xrt_core::transform::{ray_grid, BoundaryParam, RayTable, ShortGeodesicParams};
use xrt_core::Vec2;

mod common;

/// Errors below this are rounding; a pair of such errors counts as exact convergence.
const ORDER_NOISE_FLOOR: f64 = 1e-9;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn descending(rng: &mut ChaCha8Rng, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    loop {
        let mut a: Vec<f64> = (0..len).map(|_| rng.gen_range(lo..hi)).collect();
        a.sort_by(|x, y| y.total_cmp(x));
        if a.windows(2).all(|w| w[0] > w[1]) {
            return a;
        }
    }
}

fn vandermonde_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for k in 0..200 {
        let n = 1 + k % 8;
        let a = descending(&mut rng, n + 1, -10.0, 10.0);
        let closed = vandermonde_det(&a).unwrap();
        let lu = vandermonde_det_lu(&a).unwrap();
        worst = worst.max(((lu - closed) / closed).abs());
    }
    outcome(
        worst <= 1e-8,
        format!("max relative error {worst:.2e} (tol 1e-8)"),
    )
}

fn cone_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut worst_zero = 0.0f64;
    let mut failures = 0;
    for k in 0..100 {
        let n = 1 + k % 5;
        let alphas = descending(&mut rng, n + 1, -3.0, 3.0);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
        let cone = ConeSpec::new(alphas.clone(), values.clone()).unwrap();
        let data = |t: f64| cone_line_integral(&cone, &LineProbe::new(1.0, t)?);
        match recover_cone_values(&alphas, &data, 1.0, None) {
            Ok(rec) => {
                for (r, v) in rec.values.iter().zip(&values) {
                    worst = worst.max((r - v).abs());
                }
            }
            Err(_) => failures += 1,
        }
        let zero = ConeSpec::new(alphas.clone(), vec![0.0; n]).unwrap();
        let data = |t: f64| cone_line_integral(&zero, &LineProbe::new(1.0, t)?);
        match recover_cone_values(&alphas, &data, 1.0, None) {
            Ok(rec) => worst_zero = rec.values.iter().fold(worst_zero, |m, v| m.max(v.abs())),
            Err(_) => failures += 1,
        }
    }
    outcome(
        failures == 0 && worst <= 1e-6 && worst_zero <= 1e-12,
        format!("max error {worst:.2e} (tol 1e-6), zero data {worst_zero:.2e} (tol 1e-12), failed solves {failures}"),
    )
}

fn expansion_coefficients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let a = descending(&mut rng, 2, -3.0, 3.0);
        let c = kernel_taylor_coefficients(a[0], a[1], None, 5).unwrap();
        for (k, ck) in c.iter().enumerate() {
            let p = k as i32 + 1;
            worst = worst.max((ck - (a[0].powi(p) - a[1].powi(p))).abs());
        }
    }
    outcome(
        worst <= 1e-6,
        format!("max coefficient error {worst:.2e} for k <= 5 (tol 1e-6)"),
    )
}

fn corner_limits() -> Outcome {
    let hs = [0.1, 0.05, 0.025, 0.0125];
    let tiling = wedge_tiling();
    let f = PiecewiseConstantFunction::new(&tiling, wedge_values()).unwrap();
    let x = tiling.vertices()[WEDGE_CORNER];
    let params = ShortGeodesicParams::default();

    let e = euclidean_scene();
    let v = boundary_normal(&e.domain, &e.metric, &x).unwrap();
    let re = corner_limit(&f, &e.metric, &e.domain, &x, &v, &hs, &params).unwrap();
    let order_e = re.min_order(ORDER_NOISE_FLOOR);
    let err_e = (re.extrapolated_limit - 2.0).abs();
    let tangent_ok = (re.tangent_value - 2.0).abs() <= 1e-12;

    let c = conformal_scene();
    let v = boundary_normal(&c.domain, &c.metric, &x).unwrap();
    let rc = corner_limit(&f, &c.metric, &c.domain, &x, &v, &hs, &params).unwrap();
    let err_c = (rc.extrapolated_limit - rc.tangent_value).abs();
    let order_c = rc.min_order(ORDER_NOISE_FLOOR);

    let passed = order_e >= 1.0 && err_e <= 1e-3 && tangent_ok && err_c <= 10.0 * hs[3];
    outcome(
        passed,
        format!(
            "euclidean: limit error {err_e:.2e} (tol 1e-3), order {order_e:.2} (errors {:?}); conformal: |limit - tangent| {err_c:.2e} (tol {:.3}), order {order_c:.2}",
            re.errors().iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>(),
            10.0 * hs[3]
        ),
    )
}

fn geodesic_tracer() -> Outcome {
    let domain = Domain::unit_disk();
    let log = MetricField::conformal_log(1.0).unwrap();
    let start = Vec2::new(-1.0, 0.0);
    let dir = Vec2::new(1.0, 0.0);
    let le = trace_geodesic(&MetricField::Euclidean, &domain, start, dir, DEFAULT_STEP)
        .unwrap()
        .total_length;
    let ll = trace_geodesic(&log, &domain, start, dir, DEFAULT_STEP)
        .unwrap()
        .total_length;
    let mut worst_rev = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for metric in [MetricField::Euclidean, log] {
        for _ in 0..100 {
            let psi = rng.gen_range(0.0..2.0 * PI);
            let x = Vec2::new(psi.cos(), psi.sin());
            let theta = rng.gen_range(0.02..PI - 0.02);
            let d = Vec2::new(-x[1], x[0]) * theta.cos() - x * theta.sin();
            let p = trace_geodesic(&metric, &domain, x, d, DEFAULT_STEP).unwrap();
            let back = trace_geodesic(
                &metric,
                &domain,
                p.exit_point,
                -p.exit_velocity(),
                DEFAULT_STEP,
            )
            .unwrap();
            worst_rev = worst_rev.max((back.exit_point - p.entry_point).norm());
        }
    }
    let (de, dl) = ((le - 2.0).abs(), (ll - 8.0 / 3.0).abs());
    outcome(
        de <= 1e-6 && dl <= 1e-6 && worst_rev <= 1e-6,
        format!("diameter errors {de:.2e} / {dl:.2e} (tol 1e-6), reversibility {worst_rev:.2e} (tol 1e-6)"),
    )
}

fn forward_exactness() -> Outcome {
    let fixtures = [single_ring_tiling(), two_ring_tiling(), wedge_tiling()];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for k in 0..500 {
        let tiling = &fixtures[k % fixtures.len()];
        let values: Vec<f64> = (0..tiling.len())
            .map(|_| rng.gen_range(-1.0..=1.0))
            .collect();
        let psi = rng.gen_range(0.0..2.0 * PI);
        let x = Vec2::new(psi.cos(), psi.sin());
        let theta = rng.gen_range(0.02..PI - 0.02);
        let d = Vec2::new(-x[1], x[0]) * theta.cos() - x * theta.sin();
        let path =
            trace_geodesic(&MetricField::Euclidean, tiling.domain(), x, d, DEFAULT_STEP).unwrap();
        let f = PiecewiseConstantFunction::new(tiling, values.clone()).unwrap();
        let got = xrt_core::transform::integrate_along(&f, &path).unwrap();
        let dir = d.normalize();
        let expected: f64 = (0..tiling.len())
            .map(|t| values[t] * common::clipped_length(tiling, t, &x, &dir))
            .sum();
        worst = worst.max((got - expected).abs());
    }
    outcome(
        worst <= 1e-9,
        format!("max |integral - clipped| {worst:.2e} over 500 rays (tol 1e-9)"),
    )
}

fn injectivity() -> Outcome {
    let mut details = Vec::new();
    let mut passed = true;
    for (name, scene) in [
        ("euclidean", euclidean_scene()),
        ("conformal", conformal_scene()),
    ] {
        for (mesh, tiling) in [("8", single_ring_tiling()), ("24", two_ring_tiling())] {
            match verify_injectivity(
                &tiling,
                &scene.metric,
                &scene.foliation,
                10,
                7,
                64,
                32,
                &LayerOptions::default(),
            ) {
                Ok(r) => {
                    let (layer, global, dis) =
                        r.trials
                            .iter()
                            .fold((0.0f64, 0.0f64, 0.0f64), |(a, b, c), t| {
                                (
                                    a.max(t.layer_error),
                                    b.max(t.global_error),
                                    c.max(t.disagreement),
                                )
                            });
                    passed &= r.passed() && r.trials.len() == 10;
                    details.push(format!(
                        "{name}/{mesh}: layer {layer:.1e} global {global:.1e} diff {dis:.1e} zero {:.1e}",
                        r.zero_data_max
                    ));
                }
                Err(e) => {
                    passed = false;
                    details.push(format!("{name}/{mesh}: {e}"));
                }
            }
        }
    }
    outcome(
        passed,
        format!("{} (tol 1e-6, zero 1e-9)", details.join("; ")),
    )
}

fn outer_layer_support() -> Outcome {
    let tiling = two_ring_tiling();
    let schedule = layer_schedule(&euclidean_scene().foliation, &tiling);
    let mut passed = schedule.len() == 2 && schedule.groups[0] == (8..24).collect::<Vec<_>>();
    let mut details = Vec::new();
    for (name, scene) in [
        ("euclidean", euclidean_scene()),
        ("conformal", conformal_scene()),
    ] {
        let Scene {
            metric, foliation, ..
        } = scene;
        let param = BoundaryParam::new(tiling.domain(), &metric);
        let table =
            RayTable::trace(&tiling, &metric, &param, &ray_grid(&param, 64, 32), true).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let values: Vec<f64> = (0..24)
            .map(|t| {
                if t < 8 {
                    rng.gen_range(-1.0..=1.0)
                } else {
                    0.0
                }
            })
            .collect();
        let data: Vec<f64> = table.rays.iter().map(|r| r.integral(&values)).collect();
        let rec = layer_strip_solve(
            &table,
            &data,
            &tiling,
            &foliation,
            &schedule,
            &LayerOptions::default(),
        )
        .unwrap();
        let outer = &rec.layers[0];
        let max_outer = outer.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        // rays confined to the outer layer never enter an inner triangle
        let confined = table
            .rays
            .iter()
            .filter(|r| {
                foliation.scale * r.min_norm_sq > schedule.levels[1]
                    && r.lengths[..8].iter().all(|l| *l == 0.0)
            })
            .count();
        let inner_hits = table
            .rays
            .iter()
            .filter(|r| r.lengths[..8].iter().any(|l| *l > 0.0))
            .count();
        passed &= max_outer <= 1e-6 && outer.rays == confined && inner_hits > 0 && confined > 0;
        details.push(format!(
            "{name}: max |outer| {max_outer:.2e} from {} confined rays",
            outer.rays
        ));
    }
    outcome(passed, format!("{} (tol 1e-6)", details.join("; ")))
}

fn tiling_validation() -> Outcome {
    let (tj, domain) = t_junction();
    let report = validate_tiling(&tj, &domain, 0, 0);
    let tj_fails = report.has(ViolationKind::DepthConsistency);
    let fixtures: [(&str, Tiling); 3] = [
        ("8", single_ring_tiling()),
        ("24", two_ring_tiling()),
        ("wedge", wedge_tiling()),
    ];
    let mut all = tj_fails;
    let mut details = vec![format!("T-junction depth violation: {tj_fails}")];
    for (name, t) in fixtures {
        let r = validate_tiling(&t, t.domain(), 100_000, 9);
        all &= r.passed() && r.coverage_samples == 100_000;
        details.push(format!(
            "{name}: {} violations, {} misses",
            r.violations.len(),
            r.coverage_misses
        ));
    }
    outcome(all, details.join("; "))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "Vandermonde identity",
            vandermonde_identity,
            Duration::from_secs(1),
        ),
        ("cone recovery", cone_recovery, Duration::from_secs(5)),
        (
            "expansion coefficients",
            expansion_coefficients,
            Duration::from_secs(1),
        ),
        ("corner limit", corner_limits, Duration::from_secs(30)),
        ("geodesic tracer", geodesic_tracer, Duration::from_secs(10)),
        (
            "forward exactness",
            forward_exactness,
            Duration::from_secs(10),
        ),
        (
            "injectivity round trip",
            injectivity,
            Duration::from_secs(120),
        ),
        ("outer-layer support", outer_layer_support, Duration::from_secs(30)),
        (
            "tiling validation",
            tiling_validation,
            Duration::from_secs(10),
        ),
    ];
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result =
            std::panic::catch_unwind(run).unwrap_or_else(|_| outcome(false, "panicked".into()));
        let elapsed = start.elapsed();
        let ok = result.passed && elapsed <= *budget;
        failed += usize::from(!ok);
        println!(
            "criterion {}: {} {name}: {} [{:.2}s, budget {}s]",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
