use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::geodesic::{flow, trace_geodesic, DEFAULT_STEP};
use crate::geometry::{second_fundamental_form, Domain, MetricField};
use crate::{Error, Result, Vec2};

/// Radial quadratic exhaustion function `φ(x) = scale · |x|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FoliationFunction {
    pub scale: f64,
}

impl Default for FoliationFunction {
    fn default() -> Self {
        FoliationFunction { scale: 1.0 }
    }
}

impl FoliationFunction {
    pub fn radial_quadratic() -> Self {
        Self::default()
    }

    pub fn value(&self, x: &Vec2) -> f64 {
        self.scale * x.norm_squared()
    }

    pub fn gradient(&self, x: &Vec2) -> Vec2 {
        x * (2.0 * self.scale)
    }

    /// Infimum of `φ` over a domain containing the origin.
    pub fn inf_value(&self, domain: &Domain) -> f64 {
        if self.scale >= 0.0 {
            0.0
        } else {
            self.scale * domain.max_radius().powi(2)
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FoliationSpec {
    pub kind: String,
    #[serde(default = "one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<&FoliationSpec> for FoliationFunction {
    type Error = Error;

    fn try_from(spec: &FoliationSpec) -> Result<Self> {
        match spec.kind.as_str() {
            "radial-quadratic" if spec.scale.is_finite() && spec.scale != 0.0 => {
                Ok(FoliationFunction { scale: spec.scale })
            }
            other => Err(Error::invalid(format!("bad foliation kind '{other}'"))),
        }
    }
}

impl From<&FoliationFunction> for FoliationSpec {
    fn from(f: &FoliationFunction) -> Self {
        FoliationSpec {
            kind: "radial-quadratic".into(),
            scale: f.scale,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ConvexityReport {
    pub min_second_derivative: f64,
    pub evaluations: usize,
    pub trapped: usize,
    pub passed: bool,
}

const SAMPLES_PER_GEODESIC: usize = 16;
const CONVEXITY_THRESHOLD: f64 = 1e-6;

/// Estimates `(φ∘γ)''` by central differences along random unit-speed geodesics.
pub fn check_strictly_convex(
    metric: &MetricField,
    domain: &Domain,
    phi: &FoliationFunction,
    trials: usize,
    seed: u64,
) -> Result<ConvexityReport> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = domain.max_radius();
    let delta = 1e-3;
    let mut min_d2 = f64::INFINITY;
    let mut evaluations = 0;
    let mut trapped = 0;
    for _ in 0..trials {
        let start = loop {
            let p = Vec2::new(rng.gen_range(-r..r), rng.gen_range(-r..r));
            if domain.b(&p) < -1e-6 {
                break p;
            }
        };
        let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let path = match trace_geodesic(
            metric,
            domain,
            start,
            Vec2::new(angle.cos(), angle.sin()),
            DEFAULT_STEP,
        ) {
            Ok(p) => p,
            Err(Error::Trapped { .. }) => {
                trapped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let n = path.samples.len();
        if n < 3 {
            continue;
        }
        for j in 0..SAMPLES_PER_GEODESIC {
            let k = 1 + j * (n - 2) / SAMPLES_PER_GEODESIC;
            let s = path.samples[k];
            let (xp, _, _) = flow(metric, s.point, s.velocity, None, delta, delta / 4.0);
            let (xm, _, _) = flow(metric, s.point, s.velocity, None, -delta, delta / 4.0);
            let d2 =
                (phi.value(&xp) + phi.value(&xm) - 2.0 * phi.value(&s.point)) / (delta * delta);
            min_d2 = min_d2.min(d2);
            evaluations += 1;
        }
    }
    Ok(ConvexityReport {
        min_second_derivative: min_d2,
        evaluations,
        trapped,
        passed: evaluations > 0 && min_d2 > CONVEXITY_THRESHOLD,
    })
}

/// Smallest boundary curvature over `samples` equally spaced polar angles.
pub fn min_boundary_curvature(
    domain: &Domain,
    metric: &MetricField,
    samples: usize,
) -> Result<f64> {
    let mut min_k = f64::INFINITY;
    for k in 0..samples.max(1) {
        let psi = std::f64::consts::TAU * k as f64 / samples.max(1) as f64;
        let x = domain.boundary_point_at_angle(psi);
        min_k = min_k.min(second_fundamental_form(domain, metric, &x)?);
    }
    Ok(min_k)
}
