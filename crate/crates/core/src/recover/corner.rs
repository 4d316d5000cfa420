use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;

use crate::geometry::{second_fundamental_form, Domain, MetricField};
use crate::tiling::{tangent_fan, PiecewiseConstantFunction, TangentFan};
use crate::transform::{RayFamily, ShortGeodesicParams};
use crate::{Error, Result, Vec2};

/// Angular distance from `±π/2` below which a sector edge counts as tangent.
const TANGENT_TOL: f64 = 1e-12;

/// `∫_{σ_v^1} T_x f ds`: the fan integrated over the tangent-plane line at
/// unit distance along `v`, orthogonal to `v`.
///
/// The metric is conformal, so a sector spanning angles `β₁ < β₂` from `v`
/// cuts a chord of Riemannian length `tan β₂ − tan β₁` whatever the
/// conformal factor at the base. Zero-valued sectors are skipped.
pub fn tangent_sector_integral(fan: &TangentFan, v: &Vec2) -> Result<f64> {
    let psi = v[1].atan2(v[0]);
    let mut total = 0.0;
    for sector in fan.sectors.iter().filter(|s| s.value != 0.0) {
        let b1 = (sector.start - psi + std::f64::consts::PI).rem_euclid(TAU) - std::f64::consts::PI;
        let b2 = b1 + sector.width();
        for shift in [-TAU, 0.0, TAU] {
            let lo = (b1 + shift).max(-FRAC_PI_2);
            let hi = (b2 + shift).min(FRAC_PI_2);
            if hi <= lo {
                continue;
            }
            if lo + FRAC_PI_2 <= TANGENT_TOL || FRAC_PI_2 - hi <= TANGENT_TOL {
                return Err(Error::TangentialSector);
            }
            total += sector.value * (hi.tan() - lo.tan());
        }
    }
    Ok(total)
}

/// Scaled short-geodesic integrals at a boundary point and their limit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerProbeResult {
    pub h_sequence: Vec<f64>,
    /// `(1/h)·∫_{γ_{v,h}} f ds` per `h`.
    pub scaled_integrals: Vec<f64>,
    /// First-order Richardson extrapolation from the two smallest `h`.
    pub extrapolated_limit: f64,
    pub tangent_value: f64,
}

impl CornerProbeResult {
    /// `|scaled − tangent_value|` per `h`.
    pub fn errors(&self) -> Vec<f64> {
        self.scaled_integrals
            .iter()
            .map(|s| (s - self.tangent_value).abs())
            .collect()
    }

    /// Observed convergence orders between consecutive `h`. Pairs whose
    /// errors are both below `floor` are resolved to rounding and report
    /// `+∞`; a pair with only one error below `floor` reports `NaN`.
    pub fn orders(&self, floor: f64) -> Vec<f64> {
        let e = self.errors();
        (0..e.len().saturating_sub(1))
            .map(|i| {
                if e[i] <= floor && e[i + 1] <= floor {
                    f64::INFINITY
                } else if e[i] <= floor || e[i + 1] <= floor {
                    f64::NAN
                } else {
                    (e[i] / e[i + 1]).ln() / (self.h_sequence[i] / self.h_sequence[i + 1]).ln()
                }
            })
            .collect()
    }

    /// Smallest observed order (see [`orders`](Self::orders)).
    pub fn min_order(&self, floor: f64) -> f64 {
        self.orders(floor).into_iter().fold(f64::INFINITY, |m, p| {
            if p.is_nan() {
                f64::NAN
            } else {
                m.min(p)
            }
        })
    }
}

/// Richardson extrapolation to `h = 0` assuming an error linear in `h`.
pub fn richardson(h0: f64, s0: f64, h1: f64, s1: f64) -> f64 {
    (h0 * s1 - h1 * s0) / (h0 - h1)
}

/// Estimates `lim_{h→0} (1/h)∫_{γ_{v,h}} f` at the boundary point `x`.
pub fn corner_limit(
    f: &PiecewiseConstantFunction,
    metric: &MetricField,
    domain: &Domain,
    x: &Vec2,
    v: &Vec2,
    hs: &[f64],
    params: &ShortGeodesicParams,
) -> Result<CornerProbeResult> {
    if hs.len() < 2 || hs.iter().any(|h| !(*h > 0.0)) || hs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid(
            "h sequence must be positive, strictly decreasing, with at least two entries",
        ));
    }
    let kappa = second_fundamental_form(domain, metric, x)?;
    if !(kappa > 0.0) {
        return Err(Error::ConvexityCheckFailed(kappa));
    }
    let family = RayFamily::new(metric, domain, x, v, hs, params)?;
    let scaled = family.scaled_integrals(f)?;
    let n = hs.len();
    let extrapolated_limit = richardson(hs[n - 2], scaled[n - 2], hs[n - 1], scaled[n - 1]);
    let fan = tangent_fan(f, metric, x)?;
    let tangent_value = tangent_sector_integral(&fan, v)?;
    Ok(CornerProbeResult {
        h_sequence: hs.to_vec(),
        scaled_integrals: scaled,
        extrapolated_limit,
        tangent_value,
    })
}
