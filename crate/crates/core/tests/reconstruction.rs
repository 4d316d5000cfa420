use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xrt_core::fixtures::{conformal_scene, euclidean_scene, single_ring_tiling, two_ring_tiling};
use xrt_core::recover::{
    global_lsq_reconstruct, layer_schedule, layer_strip_reconstruct, layer_strip_solve,
    verify_injectivity, LayerOptions,
};
use xrt_core::tiling::{PiecewiseConstantFunction, Tiling};
use xrt_core::transform::{make_sinogram, ray_grid, BoundaryParam, RayTable, Sinogram};
use xrt_core::Error;

fn random_values(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn sinogram(tiling: &Tiling, values: Vec<f64>, conformal: bool) -> Sinogram {
    let scene = if conformal {
        conformal_scene()
    } else {
        euclidean_scene()
    };
    let f = PiecewiseConstantFunction::new(tiling, values).unwrap();
    make_sinogram(&f, &scene.metric, 48, 24).unwrap()
}

#[test]
fn single_ring_round_trip_both_methods() {
    let tiling = single_ring_tiling();
    let scene = euclidean_scene();
    let values = random_values(tiling.len(), 1);
    let sino = sinogram(&tiling, values.clone(), false);
    let layer = layer_strip_reconstruct(
        &sino,
        &tiling,
        &scene.metric,
        &scene.foliation,
        &LayerOptions::default(),
    )
    .unwrap();
    let global = global_lsq_reconstruct(&sino, &tiling, &scene.metric).unwrap();
    assert!(
        max_diff(&layer.values, &values) < 1e-6,
        "{:?}",
        layer.values
    );
    assert!(max_diff(&global.values, &values) < 1e-6);
    assert!(max_diff(&layer.values, &global.values) < 1e-6);
}

#[test]
fn two_ring_conformal_round_trip() {
    let tiling = two_ring_tiling();
    let scene = conformal_scene();
    let values = random_values(tiling.len(), 2);
    let sino = sinogram(&tiling, values.clone(), true);
    let layer = layer_strip_reconstruct(
        &sino,
        &tiling,
        &scene.metric,
        &scene.foliation,
        &LayerOptions::default(),
    )
    .unwrap();
    assert_eq!(layer.layers.len(), 2);
    assert!(max_diff(&layer.values, &values) < 1e-6);
}

#[test]
fn zero_sinogram_gives_zero_values() {
    let tiling = two_ring_tiling();
    let scene = euclidean_scene();
    let sino = sinogram(&tiling, vec![0.0; tiling.len()], false);
    let layer = layer_strip_reconstruct(
        &sino,
        &tiling,
        &scene.metric,
        &scene.foliation,
        &LayerOptions::default(),
    )
    .unwrap();
    let global = global_lsq_reconstruct(&sino, &tiling, &scene.metric).unwrap();
    assert!(layer
        .values
        .iter()
        .chain(&global.values)
        .all(|v| v.abs() <= 1e-9));
}

#[test]
fn constant_function_is_recovered() {
    let tiling = single_ring_tiling();
    let scene = conformal_scene();
    let sino = sinogram(&tiling, vec![0.75; tiling.len()], true);
    let global = global_lsq_reconstruct(&sino, &tiling, &scene.metric).unwrap();
    assert!(global.values.iter().all(|v| (v - 0.75).abs() <= 1e-7));
}

#[test]
fn reconstruction_is_linear() {
    let tiling = two_ring_tiling();
    let scene = euclidean_scene();
    let param = BoundaryParam::new(tiling.domain(), &scene.metric);
    let table = RayTable::trace(
        &tiling,
        &scene.metric,
        &param,
        &ray_grid(&param, 40, 20),
        true,
    )
    .unwrap();
    let schedule = layer_schedule(&scene.foliation, &tiling);
    let (u, v) = (random_values(24, 3), random_values(24, 4));
    let data = |vals: &[f64]| {
        table
            .rays
            .iter()
            .map(|r| r.integral(vals))
            .collect::<Vec<_>>()
    };
    let solve = |d: &[f64]| {
        layer_strip_solve(
            &table,
            d,
            &tiling,
            &scene.foliation,
            &schedule,
            &LayerOptions::default(),
        )
        .unwrap()
        .values
    };
    let sum: Vec<f64> = data(&u).iter().zip(data(&v)).map(|(a, b)| a + b).collect();
    let expected: Vec<f64> = solve(&data(&u))
        .iter()
        .zip(solve(&data(&v)))
        .map(|(a, b)| a + b)
        .collect();
    assert!(max_diff(&solve(&sum), &expected) < 1e-6);
}

#[test]
fn outer_layer_vanishes_before_inner_rays_are_used() {
    let tiling = two_ring_tiling();
    let scene = euclidean_scene();
    let mut values = random_values(tiling.len(), 5);
    for v in &mut values[8..] {
        *v = 0.0;
    }
    let sino = sinogram(&tiling, values, false);
    let rec = layer_strip_reconstruct(
        &sino,
        &tiling,
        &scene.metric,
        &scene.foliation,
        &LayerOptions::default(),
    )
    .unwrap();
    let outer = &rec.layers[0];
    assert_eq!(outer.triangles, (8..24).collect::<Vec<_>>());
    assert!(outer.values.iter().all(|v| v.abs() <= 1e-6));
    assert!(outer.rays < sino.rows.len());
}

#[test]
fn sparse_sinogram_is_underdetermined() {
    let tiling = two_ring_tiling();
    let scene = euclidean_scene();
    let sino = sinogram(&tiling, vec![0.0; 24], false);
    let thin = Sinogram {
        rows: sino.rows.iter().step_by(97).copied().collect(),
        dropped: 0,
    };
    let err = layer_strip_reconstruct(
        &thin,
        &tiling,
        &scene.metric,
        &scene.foliation,
        &LayerOptions::default(),
    )
    .unwrap_err();
    assert!(
        matches!(err, Error::UnderdeterminedLayer { level: 0, .. }),
        "{err:?}"
    );
}

#[test]
fn concave_foliation_is_refused() {
    let tiling = single_ring_tiling();
    let scene = euclidean_scene();
    let sino = sinogram(&tiling, vec![0.0; 8], false);
    let phi = xrt_core::geometry::FoliationFunction { scale: -1.0 };
    let err = layer_strip_reconstruct(
        &sino,
        &tiling,
        &scene.metric,
        &phi,
        &LayerOptions::default(),
    )
    .unwrap_err();
    assert!(matches!(err, Error::ConvexityCheckFailed(_)));
}

#[test]
fn injectivity_report_passes_on_single_ring() {
    let tiling = single_ring_tiling();
    let scene = euclidean_scene();
    let report = verify_injectivity(
        &tiling,
        &scene.metric,
        &scene.foliation,
        3,
        7,
        32,
        16,
        &LayerOptions::default(),
    )
    .unwrap();
    assert!(report.passed(), "{report:?}");
    assert!(report.adversarial_max_integral > 0.0);
}
