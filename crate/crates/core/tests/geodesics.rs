use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xrt_core::geometry::{
    parallel_transport, trace_geodesic, transport_along, Domain, MetricField, DEFAULT_STEP,
};
use xrt_core::{Error, Vec2};

fn log_metric() -> MetricField {
    MetricField::conformal_log(1.0).unwrap()
}

fn random_boundary_ray(rng: &mut ChaCha8Rng) -> (Vec2, Vec2) {
    let psi = rng.gen_range(0.0..2.0 * PI);
    let x = Vec2::new(psi.cos(), psi.sin());
    // inward, at most 80° from the normal
    let tilt = rng.gen_range(-1.4..1.4);
    let n = -x;
    let d = Vec2::new(
        n[0] * f64::cos(tilt) - n[1] * f64::sin(tilt),
        n[0] * f64::sin(tilt) + n[1] * f64::cos(tilt),
    );
    (x, d)
}

#[test]
fn euclidean_diameter_has_length_two() {
    let p = trace_geodesic(
        &MetricField::Euclidean,
        &Domain::unit_disk(),
        Vec2::new(-1.0, 0.0),
        Vec2::new(1.0, 0.0),
        DEFAULT_STEP,
    )
    .unwrap();
    assert!((p.total_length - 2.0).abs() < 1e-6);
    assert!((p.exit_point - Vec2::new(1.0, 0.0)).norm() < 1e-9);
}

#[test]
fn log_metric_diameter_has_length_eight_thirds() {
    // ∫_{-1}^{1} (1 + x²) dx
    let p = trace_geodesic(
        &log_metric(),
        &Domain::unit_disk(),
        Vec2::new(-1.0, 0.0),
        Vec2::new(1.0, 0.0),
        DEFAULT_STEP,
    )
    .unwrap();
    assert!(
        (p.total_length - 8.0 / 3.0).abs() < 1e-6,
        "{}",
        p.total_length
    );
}

#[test]
fn euclidean_chord_between_known_points() {
    let a = Vec2::new(1f64.cos(), 1f64.sin());
    let b = Vec2::new(2f64.cos(), 2f64.sin());
    let p = trace_geodesic(
        &MetricField::Euclidean,
        &Domain::unit_disk(),
        a,
        b - a,
        DEFAULT_STEP,
    )
    .unwrap();
    assert!((p.exit_point - b).norm() < 1e-9);
    assert!((p.total_length - (b - a).norm()).abs() < 1e-9);
}

#[test]
fn interior_start_is_stitched() {
    let p = trace_geodesic(
        &log_metric(),
        &Domain::unit_disk(),
        Vec2::new(0.2, 0.0),
        Vec2::new(-1.0, 0.0),
        DEFAULT_STEP,
    )
    .unwrap();
    assert!((p.entry_point - Vec2::new(1.0, 0.0)).norm() < 1e-9);
    assert!((p.exit_point - Vec2::new(-1.0, 0.0)).norm() < 1e-9);
    assert!((p.total_length - 8.0 / 3.0).abs() < 1e-6);
}

#[test]
fn reversibility_and_unit_speed() {
    let domain = Domain::unit_disk();
    for metric in [
        MetricField::Euclidean,
        log_metric(),
        MetricField::conformal_radial(vec![0.0, 0.25]).unwrap(),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (x, d) = random_boundary_ray(&mut rng);
            let p = trace_geodesic(&metric, &domain, x, d, DEFAULT_STEP).unwrap();
            assert!(p.max_speed_defect(&metric) <= 1e-8);
            let back = trace_geodesic(
                &metric,
                &domain,
                p.exit_point,
                -p.exit_velocity(),
                DEFAULT_STEP,
            )
            .unwrap();
            assert!((back.exit_point - p.entry_point).norm() < 1e-6);
        }
    }
}

#[test]
fn step_halving_changes_length_little() {
    let domain = Domain::unit_disk();
    let metric = log_metric();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let (x, d) = random_boundary_ray(&mut rng);
        let a = trace_geodesic(&metric, &domain, x, d, DEFAULT_STEP).unwrap();
        let b = trace_geodesic(&metric, &domain, x, d, DEFAULT_STEP / 2.0).unwrap();
        assert!((a.total_length - b.total_length).abs() <= 1e-7);
    }
}

#[test]
fn start_checks() {
    let d = Domain::unit_disk();
    let m = MetricField::Euclidean;
    assert!(matches!(
        trace_geodesic(
            &m,
            &d,
            Vec2::new(2.0, 0.0),
            Vec2::new(-1.0, 0.0),
            DEFAULT_STEP
        ),
        Err(Error::StartOutside(_))
    ));
    assert_eq!(
        trace_geodesic(
            &m,
            &d,
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 0.0),
            DEFAULT_STEP
        )
        .unwrap_err(),
        Error::NotInward
    );
}

#[test]
fn euclidean_transport_is_identity() {
    let p = trace_geodesic(
        &MetricField::Euclidean,
        &Domain::unit_disk(),
        Vec2::new(0.0, -1.0),
        Vec2::new(0.3, 1.0),
        DEFAULT_STEP,
    )
    .unwrap();
    let w = Vec2::new(0.4, -0.7);
    let out = parallel_transport(&MetricField::Euclidean, &p, w, 0.8 * p.total_length).unwrap();
    assert!((out - w).norm() < 1e-14);
}

#[test]
fn transport_preserves_norm_and_converges() {
    let metric = log_metric();
    let domain = Domain::unit_disk();
    let x = Vec2::new(0.0, -1.0);
    let p = trace_geodesic(&metric, &domain, x, Vec2::new(0.5, 1.0), DEFAULT_STEP).unwrap();
    let w = Vec2::new(0.25, 0.1);
    let s = 0.6 * p.total_length;
    let wt = parallel_transport(&metric, &p, w, s).unwrap();
    let end = p
        .samples
        .iter()
        .min_by(|a, b| (a.arclength - s).abs().total_cmp(&(b.arclength - s).abs()))
        .unwrap();
    // the transported norm is taken at the transported base point
    let (y, _, w_free) = transport_along(&metric, x, p.entry_velocity(), w, s, DEFAULT_STEP);
    assert!((metric.norm(&y, &w_free) - metric.norm(&x, &w)).abs() < 1e-10);
    let (_, _, fine) = transport_along(&metric, x, p.entry_velocity(), w, s, DEFAULT_STEP / 10.0);
    assert!((w_free - fine).norm() < 1e-7);
    assert!(
        (wt - w_free).norm() < 1e-6,
        "{wt} vs {w_free} near {}",
        end.point
    );
    assert!(matches!(
        parallel_transport(&metric, &p, w, p.total_length + 1.0),
        Err(Error::DistanceOutOfRange { .. })
    ));
}
