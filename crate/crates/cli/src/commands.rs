use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use xrt_core::conemodel::{
    chebyshev_nodes, cone_line_integral, default_halfwidth, recover_cone_values, vandermonde_det,
    vandermonde_det_lu, vandermonde_matrix, ConeFile, ConeSpec, LineProbe,
};
use xrt_core::fixtures;
use xrt_core::geometry::{boundary_normal, trace_geodesic, DEFAULT_STEP};
use xrt_core::recover::{
    corner_limit, global_lsq_reconstruct, layer_strip_reconstruct, verify_injectivity, LayerOptions,
};
use xrt_core::scene::{Scene, SceneFile};
use xrt_core::tiling::{PiecewiseConstantFunction, Tiling};
use xrt_core::transform::{ray_grid, BoundaryParam, RayTable, ShortGeodesicParams, Sinogram};
use xrt_core::Vec2;

use crate::error::CliError;
use crate::input::{self, read, write};
use crate::render::render_svg;
use crate::{Method, SceneArgs};

/// Tolerance of the forward self-check.
const SELF_CHECK_TOL: f64 = 1e-8;

fn values_text(values: &[f64]) -> String {
    values.iter().fold(String::new(), |mut s, v| {
        let _ = writeln!(s, "{v:.16e}");
        s
    })
}

#[allow(clippy::too_many_arguments)]
pub fn forward(
    args: &SceneArgs,
    values: Option<&Path>,
    ns: usize,
    ntheta: usize,
    out: &Path,
    noise: f64,
    seed: u64,
    self_check: bool,
) -> Result<(), CliError> {
    if ns == 0 || ntheta == 0 {
        return Err(CliError::Invalid(
            "--ns and --ntheta must be positive".into(),
        ));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(CliError::Invalid(
            "--noise must be a nonnegative number".into(),
        ));
    }
    let loaded = input::load(args)?;
    let values = loaded.values(values)?;
    let Scene { metric, domain, .. } = &loaded.scene;
    let param = BoundaryParam::new(domain, metric);
    let table = RayTable::trace(
        &loaded.tiling,
        metric,
        &param,
        &ray_grid(&param, ns, ntheta),
        true,
    )?;
    if table.dropped * 100 > table.requested() {
        return Err(CliError::TooManyTrapped {
            dropped: table.dropped,
            requested: table.requested(),
        });
    }
    let clean = table.sinogram(&values);
    let mut sino = clean.clone();
    if noise > 0.0 {
        let normal = Normal::new(0.0, noise).map_err(|e| CliError::Invalid(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for row in &mut sino.rows {
            row.integral += normal.sample(&mut rng);
        }
    }
    write(out, &sino.to_csv())?;
    println!("rays={} dropped={}", sino.rows.len(), sino.dropped);
    println!("flagged={}", sino.flagged());
    if self_check {
        let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let excess = clean.bound_excess(max_abs).max(0.0);
        let mut passed = excess <= SELF_CHECK_TOL;
        let mut line = format!("bound_excess={excess:e}");
        if values.iter().all(|v| *v == values[0]) {
            let c = values[0];
            let defect = clean
                .rows
                .iter()
                .map(|r| (r.integral - c * r.length).abs())
                .fold(0.0, f64::max);
            passed &= defect <= SELF_CHECK_TOL;
            let _ = write!(line, " constant_defect={defect:e}");
        }
        println!("self_check={} {line}", if passed { "pass" } else { "fail" });
        if !passed {
            return Err(CliError::CheckFailed(format!(
                "forward self-check ({line})"
            )));
        }
    }
    Ok(())
}

pub fn reconstruct(
    args: &SceneArgs,
    sinogram: &Path,
    method: Method,
    out: &Path,
    report: Option<&Path>,
) -> Result<(), CliError> {
    let loaded = input::load(args)?;
    let sino = Sinogram::from_csv(&read(sinogram)?)?;
    let Scene {
        metric, foliation, ..
    } = &loaded.scene;
    let rec = match method {
        Method::Layer => layer_strip_reconstruct(
            &sino,
            &loaded.tiling,
            metric,
            foliation,
            &LayerOptions::default(),
        )?,
        Method::Global => global_lsq_reconstruct(&sino, &loaded.tiling, metric)?,
    };
    write(out, &values_text(&rec.values))?;
    if let Some(path) = report {
        let json =
            serde_json::to_string_pretty(&rec).map_err(|e| CliError::Invalid(e.to_string()))?;
        write(path, &(json + "\n"))?;
    }
    let name = match method {
        Method::Layer => "layer",
        Method::Global => "global",
    };
    println!(
        "method={name} rays={} levels={} residual_norm={:e}",
        sino.rows.len(),
        rec.layers.len(),
        rec.residual_norm
    );
    for l in &rec.layers {
        println!(
            "level={} value={:e} triangles={} rays={} condition={:e} residual={:e}",
            l.level,
            l.value,
            l.triangles.len(),
            l.rays,
            l.condition,
            l.residual_norm
        );
    }
    Ok(())
}

pub fn cone_demo(path: &Path) -> Result<(), CliError> {
    let file: ConeFile = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    let cone = ConeSpec::new(file.alphas.clone(), file.values.clone())?;
    let alphas = cone.alphas();
    let w = file.halfwidth.unwrap_or_else(|| default_halfwidth(alphas));
    let h = file.h;
    let integral = |t: f64| cone_line_integral(&cone, &LineProbe::new(h, t)?);
    println!("n={} h={h:e} halfwidth={w:e}", cone.n());
    let mut nodes = chebyshev_nodes(2 * cone.n() + 1, w);
    nodes.sort_by(f64::total_cmp);
    for t in nodes {
        println!("t={t:+.6e} integral={:.12e}", integral(t)?);
    }
    let rec = recover_cone_values(alphas, &integral, h, Some(w))?;
    let a = vandermonde_matrix(alphas)?;
    for k in 0..cone.n() {
        let row: Vec<String> = (0..cone.n()).map(|i| format!("{:e}", a[(k, i)])).collect();
        println!(
            "k={k} coefficient={:.12e} row={}",
            rec.coefficients[k],
            row.join(",")
        );
    }
    println!(
        "det_closed={:e} det_lu={:e} condition={:e}",
        vandermonde_det(alphas)?,
        vandermonde_det_lu(alphas)?,
        rec.condition
    );
    let mut worst = 0.0f64;
    for (i, (r, v)) in rec.values.iter().zip(cone.values()).enumerate() {
        worst = worst.max((r - v).abs());
        println!(
            "i={i} value={v:e} recovered={r:.12e} error={:e}",
            (r - v).abs()
        );
    }
    println!("max_error={worst:e}");
    Ok(())
}

pub fn limit_check(
    args: &SceneArgs,
    values: Option<&Path>,
    vertex: usize,
    hs: &[f64],
    tilt: f64,
) -> Result<(), CliError> {
    let loaded = input::load(args)?;
    let values = loaded.values(values)?;
    let Scene { metric, domain, .. } = &loaded.scene;
    let x = *loaded
        .tiling
        .vertices()
        .get(vertex)
        .ok_or_else(|| CliError::Invalid(format!("vertex {vertex} out of range")))?;
    let nu = boundary_normal(domain, metric, &x)?;
    let (s, c) = tilt.to_radians().sin_cos();
    let v = Vec2::new(c * nu[0] - s * nu[1], s * nu[0] + c * nu[1]);
    let f = PiecewiseConstantFunction::new(&loaded.tiling, values)?;
    let r = corner_limit(
        &f,
        metric,
        domain,
        &x,
        &v,
        hs,
        &ShortGeodesicParams::default(),
    )?;
    let errors = r.errors();
    let orders = r.orders(1e-9);
    for (k, h) in r.h_sequence.iter().enumerate() {
        let order = if k == 0 {
            String::from("-")
        } else {
            format!("{:.4}", orders[k - 1])
        };
        println!(
            "h={h:e} scaled={:.12e} error={:e} order={order}",
            r.scaled_integrals[k], errors[k]
        );
    }
    println!(
        "limit={:.12e} tangent={:.12e} limit_error={:e}",
        r.extrapolated_limit,
        r.tangent_value,
        (r.extrapolated_limit - r.tangent_value).abs()
    );
    Ok(())
}

pub fn render(
    args: &SceneArgs,
    values: Option<&Path>,
    sinogram: Option<&Path>,
    max_rays: usize,
    out: &Path,
) -> Result<(), CliError> {
    let loaded = input::load(args)?;
    let values = match values {
        Some(p) => Some(loaded.values(Some(p))?),
        None => loaded.values(None).ok(),
    };
    let Scene { metric, domain, .. } = &loaded.scene;
    let mut rays = Vec::new();
    if let Some(path) = sinogram {
        let sino = Sinogram::from_csv(&read(path)?)?;
        let param = BoundaryParam::new(domain, metric);
        let n = sino.rows.len();
        let count = max_rays.min(n);
        for k in 0..count {
            let row = &sino.rows[k * n / count];
            let (x, d) = param.ray(domain, metric, row.s, row.theta);
            rays.push(trace_geodesic(metric, domain, x, d, DEFAULT_STEP)?);
        }
    }
    write(
        out,
        &render_svg(domain, &loaded.tiling, values.as_deref(), &rays),
    )?;
    println!("triangles={} rays={}", loaded.tiling.len(), rays.len());
    Ok(())
}

pub fn verify(
    args: &SceneArgs,
    trials: usize,
    seed: u64,
    ns: usize,
    ntheta: usize,
) -> Result<(), CliError> {
    if trials == 0 || ns == 0 || ntheta == 0 {
        return Err(CliError::Invalid(
            "--trials, --ns and --ntheta must be positive".into(),
        ));
    }
    let loaded = input::load(args)?;
    let Scene {
        metric, foliation, ..
    } = &loaded.scene;
    let opts = LayerOptions {
        seed,
        ..LayerOptions::default()
    };
    let report = verify_injectivity(
        &loaded.tiling,
        metric,
        foliation,
        trials,
        seed,
        ns,
        ntheta,
        &opts,
    )?;
    println!("rays={} dropped={}", report.rays, report.dropped);
    for t in &report.trials {
        println!(
            "trial={} layer_error={:e} global_error={:e} disagreement={:e}",
            t.trial, t.layer_error, t.global_error, t.disagreement
        );
    }
    for f in &report.failures {
        println!("failure={f}");
    }
    println!(
        "zero_data_max={:e} adversarial_max_integral={:e} max_error={:e}",
        report.zero_data_max,
        report.adversarial_max_integral,
        report.max_error()
    );
    let passed = report.passed();
    println!("result={}", if passed { "pass" } else { "fail" });
    if !passed {
        return Err(CliError::CheckFailed("injectivity round trip".into()));
    }
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Invalid(e.to_string()))
}

/// Built-in fixtures as `(file name, contents)`.
pub fn fixture_files() -> Result<Vec<(&'static str, String)>, CliError> {
    let tiling = |t: Tiling| json(&t.to_file());
    let cone = ConeFile {
        alphas: vec![2.0, 1.0, 0.5, -0.3, -1.0],
        values: vec![1.5, -2.0, 0.75, 3.0],
        h: 1.0,
        halfwidth: Some(0.05),
    };
    Ok(vec![
        (
            "scene-euclidean.json",
            json(&SceneFile::from(&fixtures::euclidean_scene()))?,
        ),
        (
            "scene-conformal.json",
            json(&SceneFile::from(&fixtures::conformal_scene()))?,
        ),
        ("single-ring.json", tiling(fixtures::single_ring_tiling())?),
        ("two-ring.json", tiling(fixtures::two_ring_tiling())?),
        ("wedge.json", tiling(fixtures::wedge_tiling())?),
        ("wedge-values.txt", values_text(&fixtures::wedge_values())),
        ("cone-example.json", json(&cone)?),
    ])
}

pub fn export_fixtures(out: &Path) -> Result<(), CliError> {
    let files = fixture_files()?;
    for (name, contents) in &files {
        write(&out.join(name), contents)?;
    }
    println!("files={}", files.len());
    Ok(())
}
