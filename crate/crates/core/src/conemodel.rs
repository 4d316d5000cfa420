//! The flat half-plane model: conical piecewise constant functions on
//! `H_+ = {y > 0}`, their integrals over the lines `y = h + t·x`, and value
//! recovery through the differenced Vandermonde system.
//!
//! The function takes the value `a_i` on the sector between the rays
//! `x = α_{i+1}·y` and `x = α_i·y`, and vanishes elsewhere in `H_+`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ConeSpec {
    alphas: Vec<f64>,
    values: Vec<f64>,
}

impl ConeSpec {
    pub fn new(alphas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_descending(&alphas)?;
        if values.len() + 1 != alphas.len() {
            return Err(Error::invalid(format!(
                "{} slopes need {} values, got {}",
                alphas.len(),
                alphas.len() - 1,
                values.len()
            )));
        }
        Ok(ConeSpec { alphas, values })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of sectors.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Value at a point of the closed upper half-plane (0 off the sectors).
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let slope = x / y;
        (0..self.n())
            .find(|&i| self.alphas[i + 1] < slope && slope < self.alphas[i])
            .map_or(0.0, |i| self.values[i])
    }
}

fn check_descending(alphas: &[f64]) -> Result<()> {
    if alphas.len() < 2
        || alphas.iter().any(|a| !a.is_finite())
        || alphas.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::AlphasNotDescending);
    }
    Ok(())
}

/// The line `y = h + t·x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineProbe {
    pub h: f64,
    pub t: f64,
}

impl LineProbe {
    pub fn new(h: f64, t: f64) -> Result<Self> {
        if !(h > 0.0) || !t.is_finite() {
            return Err(Error::invalid("probe needs h > 0 and finite t"));
        }
        Ok(LineProbe { h, t })
    }

    /// Smallest `1 − α·t` over the slopes; the probe is valid when positive.
    pub fn clearance(&self, alphas: &[f64]) -> f64 {
        alphas
            .iter()
            .map(|a| 1.0 - a * self.t)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `∫_{ℓ_t} f ds = h·√(1+t²)·Σ_i (z_i − z_{i+1})·a_i` with `z_i = α_i/(1 − α_i t)`.
pub fn cone_line_integral(cone: &ConeSpec, probe: &LineProbe) -> Result<f64> {
    let c = probe.clearance(&cone.alphas);
    if !(c > 0.0) {
        return Err(Error::ProbeDegenerate(c));
    }
    let z: Vec<f64> = cone
        .alphas
        .iter()
        .map(|a| a / (1.0 - a * probe.t))
        .collect();
    let sum: f64 = cone
        .values
        .iter()
        .enumerate()
        .map(|(i, a)| (z[i] - z[i + 1]) * a)
        .sum();
    Ok(probe.h * (1.0 + probe.t * probe.t).sqrt() * sum)
}

/// `A[k][i] = α_i^{k+1} − α_{i+1}^{k+1}`.
pub fn vandermonde_matrix(alphas: &[f64]) -> Result<DMatrix<f64>> {
    check_descending(alphas)?;
    let n = alphas.len() - 1;
    Ok(DMatrix::from_fn(n, n, |k, i| {
        let p = k as i32 + 1;
        alphas[i].powi(p) - alphas[i + 1].powi(p)
    }))
}

/// Closed form `(−1)^N Π_{i<j} (α_j − α_i)` of `det A`.
pub fn vandermonde_det(alphas: &[f64]) -> Result<f64> {
    if alphas.len() < 2 {
        return Err(Error::invalid("need at least two slopes"));
    }
    let n = alphas.len() - 1;
    let mut det = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    for i in 0..alphas.len() {
        for j in i + 1..alphas.len() {
            det *= alphas[j] - alphas[i];
        }
    }
    Ok(det)
}

/// `det A` by LU factorization.
pub fn vandermonde_det_lu(alphas: &[f64]) -> Result<f64> {
    Ok(vandermonde_matrix(alphas)?.lu().determinant())
}

/// Default stencil halfwidth `min(0.5, 0.5/max|α|)`.
pub fn default_halfwidth(alphas: &[f64]) -> f64 {
    let amax = alphas.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    if amax > 0.0 {
        (0.5 / amax).min(0.5)
    } else {
        0.5
    }
}

/// Chebyshev nodes of the first kind on `[−w, w]`.
pub fn chebyshev_nodes(count: usize, w: f64) -> Vec<f64> {
    (0..count)
        .map(|j| {
            if 2 * j + 1 == count {
                0.0
            } else {
                w * ((2 * j + 1) as f64 * PI / (2 * count) as f64).cos()
            }
        })
        .collect()
}

/// Result of a Taylor fit at `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorFit {
    /// `(1/k!) D_t^k F(0)` for `k = 0..order`.
    pub coefficients: Vec<f64>,
    pub nodes: Vec<f64>,
    /// Root-mean-square misfit of the numerator fit.
    pub residual: f64,
}

/// Taylor coefficients at zero of a sampled function `F(t) = P(t)/Π_j(1 − α_j t)`
/// with `deg P ≤ len(α) − 1`.
///
/// Both the probe integrals and the differenced kernels `z_i − z_{i+1}` have
/// this form. Clearing the known denominator leaves a polynomial that a
/// least-squares fit on Chebyshev nodes reproduces to rounding, and the
/// coefficients follow by multiplying with the power series of the
/// reciprocal denominator.
pub fn rational_taylor_fit(
    f: &dyn Fn(f64) -> Result<f64>,
    poles: &[f64],
    halfwidth: f64,
    order: usize,
) -> Result<TaylorFit> {
    if poles.is_empty() || !(halfwidth > 0.0) {
        return Err(Error::invalid(
            "rational fit needs poles and a positive halfwidth",
        ));
    }
    let degree = poles.len() - 1;
    let nodes = chebyshev_nodes(2 * degree + 1, halfwidth);
    for &t in &nodes {
        let c = LineProbe { h: 1.0, t }.clearance(poles);
        if !(c > 0.0) {
            return Err(Error::StencilInvalid(t));
        }
    }
    let denom = |t: f64| poles.iter().map(|a| 1.0 - a * t).product::<f64>();
    // Fit in the scaled variable u = t/w to keep the design matrix well conditioned.
    let design = DMatrix::from_fn(nodes.len(), degree + 1, |r, k| {
        (nodes[r] / halfwidth).powi(k as i32)
    });
    let mut rhs = DVector::zeros(nodes.len());
    for (r, &t) in nodes.iter().enumerate() {
        rhs[r] = f(t)? * denom(t);
    }
    let svd = design.clone().svd(true, true);
    let q = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::invalid(e.to_string()))?;
    let residual = ((&design * &q - &rhs).norm_squared() / nodes.len() as f64).sqrt();
    let p: Vec<f64> = (0..=degree)
        .map(|k| q[k] / halfwidth.powi(k as i32))
        .collect();

    // Power series of 1/Π(1 − α_j t) up to `order`.
    let mut inv = vec![0.0; order + 1];
    inv[0] = 1.0;
    for a in poles {
        for k in 1..=order {
            inv[k] += a * inv[k - 1];
        }
    }
    let coefficients = (0..=order)
        .map(|k| (0..=k.min(degree)).map(|j| p[j] * inv[k - j]).sum())
        .collect();
    Ok(TaylorFit {
        coefficients,
        nodes,
        residual,
    })
}

/// Values recovered from probe integrals, with solve diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeRecovery {
    pub values: Vec<f64>,
    /// Estimated `(1/k!) D_t^k m(0)` for `k = 0..N−1`.
    pub coefficients: Vec<f64>,
    /// 2-norm condition number of the Vandermonde matrix.
    pub condition: f64,
    pub halfwidth: f64,
    pub fit_residual: f64,
}

/// Recovers the cone values from `t ↦ I(ℓ_t)` at fixed intercept `h`.
///
/// `m(t) = I(t)/(h√(1+t²))` is expanded at zero and `A·a = c` is solved. A
/// `halfwidth` of `None` selects [`default_halfwidth`].
pub fn recover_cone_values(
    alphas: &[f64],
    integral: &dyn Fn(f64) -> Result<f64>,
    h: f64,
    halfwidth: Option<f64>,
) -> Result<ConeRecovery> {
    check_descending(alphas)?;
    if !(h > 0.0) {
        return Err(Error::invalid("h must be positive"));
    }
    let a = vandermonde_matrix(alphas)?;
    if vandermonde_det(alphas)? == 0.0 {
        return Err(Error::SingularSystem);
    }
    let n = alphas.len() - 1;
    let w = halfwidth.unwrap_or_else(|| default_halfwidth(alphas));
    let m = |t: f64| Ok(integral(t)? / (h * (1.0 + t * t).sqrt()));
    let fit = rational_taylor_fit(&m, alphas, w, n - 1)?;
    let c = DVector::from_column_slice(&fit.coefficients);
    let sv = a.clone().svd(false, false).singular_values;
    let condition = sv.max() / sv.min();
    let values = a.lu().solve(&c).ok_or(Error::SingularSystem)?;
    Ok(ConeRecovery {
        values: values.iter().copied().collect(),
        coefficients: fit.coefficients,
        condition,
        halfwidth: w,
        fit_residual: fit.residual,
    })
}

/// Taylor coefficients at zero of `t ↦ z_i^t − z_{i+1}^t` for the slope pair `(α_i, α_{i+1})`.
pub fn kernel_taylor_coefficients(
    ai: f64,
    aj: f64,
    halfwidth: Option<f64>,
    order: usize,
) -> Result<Vec<f64>> {
    check_descending(&[ai, aj])?;
    let poles = [ai, aj];
    let w = halfwidth.unwrap_or_else(|| default_halfwidth(&poles));
    let c = |t: f64| Ok(ai / (1.0 - ai * t) - aj / (1.0 - aj * t));
    Ok(rational_taylor_fit(&c, &poles, w, order)?.coefficients)
}

/// Cone demo input: `{alphas, values, h, halfwidth}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeFile {
    pub alphas: Vec<f64>,
    pub values: Vec<f64>,
    pub h: f64,
    #[serde(default)]
    pub halfwidth: Option<f64>,
}
