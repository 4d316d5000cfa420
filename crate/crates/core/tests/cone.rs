use proptest::prelude::*;
use xrt_core::conemodel::{
    cone_line_integral, kernel_taylor_coefficients, recover_cone_values, vandermonde_det,
    vandermonde_det_lu, vandermonde_matrix, ConeSpec, LineProbe,
};

/// Integral along the probe by locating value changes numerically: the line
/// is scanned in x, every change of the sampled function is bisected to
/// rounding, and constant pieces are summed. Independent of the closed form.
fn scanned_integral(cone: &ConeSpec, probe: &LineProbe) -> f64 {
    let f = |x: f64| cone.evaluate(x, probe.h + probe.t * x);
    let (x0, x1) = (-60.0, 60.0);
    let n = 240_000;
    let dx = (x1 - x0) / n as f64;
    let mut total = 0.0;
    let mut left = x0;
    let mut val = f(x0);
    for k in 1..=n {
        let x = x0 + k as f64 * dx;
        let fx = f(x);
        if fx != val {
            let (mut lo, mut hi) = (x - dx, x);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if f(mid) == val {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            total += val * (hi - left);
            left = hi;
            val = fx;
        }
    }
    total += val * (x1 - left);
    total * (1.0 + probe.t * probe.t).sqrt()
}

fn descending(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, n).prop_filter_map("needs distinct slopes", |mut a| {
        a.sort_by(|x, y| y.total_cmp(x));
        a.windows(2).all(|w| w[0] - w[1] > 0.05).then_some(a)
    })
}

#[test]
fn closed_form_matches_scanned_quadrature() {
    let cone = ConeSpec::new(vec![2.0, 1.0, 0.5, -0.3, -1.0], vec![1.0, -2.0, 0.5, 3.0]).unwrap();
    for (h, t) in [(1.0, 0.0), (1.0, 0.2), (0.7, -0.3), (2.0, 0.45)] {
        let probe = LineProbe::new(h, t).unwrap();
        let exact = cone_line_integral(&cone, &probe).unwrap();
        assert!((exact - scanned_integral(&cone, &probe)).abs() < 1e-9);
    }
    let unit = ConeSpec::new(vec![1.0, 0.0], vec![2.0]).unwrap();
    let probe = LineProbe::new(1.0, 0.0).unwrap();
    assert!((scanned_integral(&unit, &probe) - 2.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lu_determinant_matches_closed_form(n in 1usize..=8, seed in any::<u64>()) {
        let mut a: Vec<f64> = (0..=n).map(|k| ((seed.wrapping_mul(k as u64 + 7) % 20_000) as f64 / 1000.0) - 10.0 + k as f64 * 1e-3).collect();
        a.sort_by(|x, y| y.total_cmp(x));
        a.dedup();
        prop_assume!(a.len() == n + 1);
        let closed = vandermonde_det(&a).unwrap();
        let lu = vandermonde_det_lu(&a).unwrap();
        prop_assert!(((lu - closed) / closed).abs() <= 1e-8);
    }

    #[test]
    fn round_trip_recovers_values(alphas in (2usize..=6).prop_flat_map(|m| descending(m, -3.0, 3.0)), seed in 0u64..1000) {
        let n = alphas.len() - 1;
        let values: Vec<f64> = (0..n).map(|k| (((seed + 13 * k as u64) % 1000) as f64 / 100.0) - 5.0).collect();
        let cone = ConeSpec::new(alphas.clone(), values.clone()).unwrap();
        let i = |t: f64| cone_line_integral(&cone, &LineProbe::new(1.0, t)?);
        let rec = recover_cone_values(&alphas, &i, 1.0, None).unwrap();
        for (r, v) in rec.values.iter().zip(&values) {
            prop_assert!((r - v).abs() <= 1e-6, "{} vs {} (cond {})", r, v, rec.condition);
        }
    }

    #[test]
    fn kernel_expansion(ai in -3.0f64..3.0, gap in 0.05f64..3.0) {
        let aj = ai - gap;
        let c = kernel_taylor_coefficients(ai, aj, None, 5).unwrap();
        for (k, ck) in c.iter().enumerate() {
            let p = k as i32 + 1;
            prop_assert!((ck - (ai.powi(p) - aj.powi(p))).abs() <= 1e-6);
        }
    }

    #[test]
    fn matrix_entries(alphas in descending(4, -5.0, 5.0)) {
        let a = vandermonde_matrix(&alphas).unwrap();
        for k in 0..3 {
            for i in 0..3 {
                let p = k as i32 + 1;
                prop_assert_eq!(a[(k, i)], alphas[i].powi(p) - alphas[i + 1].powi(p));
            }
        }
    }
}
