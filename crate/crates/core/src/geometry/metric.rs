use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec2};

/// Conformal metric `g = e^{2λ(x)} I` on a planar chart.
///
/// The log-factor is radial, `λ(x) = p(|x|²)`.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricField {
    Euclidean,
    /// `p(u) = c0 + c1 u + c2 u² + ...`
    ConformalRadial {
        coeffs: Vec<f64>,
    },
    /// `p(u) = ln(1 + scale · u)`, only valid where `1 + scale·u > 0`.
    ConformalLog {
        scale: f64,
    },
}

/// Christoffel symbols indexed `[k][i][j]` for `Γ^k_{ij}`.
pub type Christoffel = [[[f64; 2]; 2]; 2];

impl MetricField {
    pub fn conformal_radial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("metric coefficients must be finite"));
        }
        Ok(MetricField::ConformalRadial { coeffs })
    }

    pub fn conformal_log(scale: f64) -> Result<Self> {
        if !scale.is_finite() {
            return Err(Error::invalid("metric scale must be finite"));
        }
        Ok(MetricField::ConformalLog { scale })
    }

    pub fn is_euclidean(&self) -> bool {
        match self {
            MetricField::Euclidean => true,
            MetricField::ConformalRadial { coeffs } => coeffs.iter().all(|&c| c == 0.0),
            MetricField::ConformalLog { scale } => *scale == 0.0,
        }
    }

    /// Radial profile `p(u)` and its derivative `p'(u)`.
    fn profile(&self, u: f64) -> (f64, f64) {
        match self {
            MetricField::Euclidean => (0.0, 0.0),
            MetricField::ConformalRadial { coeffs } => {
                let mut p = 0.0;
                let mut dp = 0.0;
                for (k, &c) in coeffs.iter().enumerate().rev() {
                    p = p * u + c;
                    if k > 0 {
                        dp = dp * u + k as f64 * c;
                    }
                }
                (p, dp)
            }
            MetricField::ConformalLog { scale } => {
                let q = 1.0 + scale * u;
                (q.ln(), scale / q)
            }
        }
    }

    pub fn logfactor(&self, x: &Vec2) -> f64 {
        self.profile(x.norm_squared()).0
    }

    pub fn logfactor_gradient(&self, x: &Vec2) -> Vec2 {
        let dp = self.profile(x.norm_squared()).1;
        x * (2.0 * dp)
    }

    /// `e^{λ(x)}`, the ratio of Riemannian to chart length.
    pub fn scale(&self, x: &Vec2) -> f64 {
        self.logfactor(x).exp()
    }

    pub fn norm(&self, x: &Vec2, v: &Vec2) -> f64 {
        self.scale(x) * v.norm()
    }

    pub fn inner(&self, x: &Vec2, v: &Vec2, w: &Vec2) -> f64 {
        (2.0 * self.logfactor(x)).exp() * v.dot(w)
    }

    /// Rescales `v` to unit Riemannian length at `x`.
    pub fn normalize(&self, x: &Vec2, v: &Vec2) -> Vec2 {
        v / self.norm(x, v)
    }

    pub fn christoffel(&self, x: &Vec2) -> Christoffel {
        christoffel_from_gradient(&self.logfactor_gradient(x))
    }

    /// Geodesic acceleration `-Γ(v, v)`.
    pub fn acceleration(&self, x: &Vec2, v: &Vec2) -> Vec2 {
        let g = self.logfactor_gradient(x);
        // Γ^k_ij v^i v^j = 2 (∇λ·v) v^k − |v|² ∂_k λ
        g * v.norm_squared() - v * (2.0 * g.dot(v))
    }

    /// Rate of change `-Γ(v, w)` of a parallel field `w` along velocity `v`.
    pub fn transport_rate(&self, x: &Vec2, v: &Vec2, w: &Vec2) -> Vec2 {
        let g = self.logfactor_gradient(x);
        g * v.dot(w) - w * g.dot(v) - v * g.dot(w)
    }
}

pub(crate) fn christoffel_from_gradient(g: &Vec2) -> Christoffel {
    let mut out = [[[0.0; 2]; 2]; 2];
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    for (k, gk) in out.iter_mut().enumerate() {
        for (i, row) in gk.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = delta(i, k) * g[j] + delta(j, k) * g[i] - delta(i, j) * g[k];
            }
        }
    }
    out
}

/// Serialized form `{kind, coeffs}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MetricSpec {
    pub kind: String,
    #[serde(default)]
    pub coeffs: Vec<f64>,
}

impl TryFrom<&MetricSpec> for MetricField {
    type Error = Error;

    fn try_from(spec: &MetricSpec) -> Result<Self> {
        match spec.kind.as_str() {
            "euclidean" => Ok(MetricField::Euclidean),
            "conformal-radial" => MetricField::conformal_radial(spec.coeffs.clone()),
            "conformal-log" => match spec.coeffs.as_slice() {
                [s] => MetricField::conformal_log(*s),
                _ => Err(Error::invalid(
                    "conformal-log takes exactly one coefficient",
                )),
            },
            other => Err(Error::invalid(format!("unknown metric kind '{other}'"))),
        }
    }
}

impl From<&MetricField> for MetricSpec {
    fn from(m: &MetricField) -> Self {
        match m {
            MetricField::Euclidean => MetricSpec {
                kind: "euclidean".into(),
                coeffs: vec![],
            },
            MetricField::ConformalRadial { coeffs } => MetricSpec {
                kind: "conformal-radial".into(),
                coeffs: coeffs.clone(),
            },
            MetricField::ConformalLog { scale } => MetricSpec {
                kind: "conformal-log".into(),
                coeffs: vec![*scale],
            },
        }
    }
}
