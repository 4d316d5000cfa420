use std::f64::consts::TAU;

use crate::geometry::{Domain, MetricField};
use crate::Vec2;

const TABLE_SIZE: usize = 1 << 14;

/// Riemannian arclength parameterization of `∂M`, counterclockwise from the
/// boundary point at polar angle zero.
#[derive(Clone, Debug)]
pub struct BoundaryParam {
    angles: Vec<f64>,
    cumulative: Vec<f64>,
    total: f64,
}

impl BoundaryParam {
    pub fn new(domain: &Domain, metric: &MetricField) -> Self {
        let angles: Vec<f64> = (0..=TABLE_SIZE)
            .map(|k| TAU * k as f64 / TABLE_SIZE as f64)
            .collect();
        let seg = |a: f64, b: f64| {
            let (p, q) = (
                domain.boundary_point_at_angle(a),
                domain.boundary_point_at_angle(b),
            );
            metric.scale(&((p + q) / 2.0)) * (q - p).norm()
        };
        let mut cumulative = Vec::with_capacity(angles.len());
        cumulative.push(0.0);
        for w in angles.windows(2) {
            // Richardson on the midpoint-weighted chord length.
            let mid = 0.5 * (w[0] + w[1]);
            let coarse = seg(w[0], w[1]);
            let fine = seg(w[0], mid) + seg(mid, w[1]);
            cumulative.push(cumulative.last().unwrap() + (4.0 * fine - coarse) / 3.0);
        }
        let total = *cumulative.last().unwrap();
        BoundaryParam {
            angles,
            cumulative,
            total,
        }
    }

    /// `|∂M|` in the Riemannian metric.
    pub fn total_length(&self) -> f64 {
        self.total
    }

    /// Polar angle of the boundary point at arclength `s` (taken modulo the perimeter).
    pub fn angle_at(&self, s: f64) -> f64 {
        let s = s.rem_euclid(self.total);
        let k = self
            .cumulative
            .partition_point(|&c| c <= s)
            .clamp(1, self.cumulative.len() - 1);
        let (c0, c1) = (self.cumulative[k - 1], self.cumulative[k]);
        let u = if c1 > c0 { (s - c0) / (c1 - c0) } else { 0.0 };
        self.angles[k - 1] + u * (self.angles[k] - self.angles[k - 1])
    }

    pub fn point_at(&self, domain: &Domain, s: f64) -> Vec2 {
        domain.boundary_point_at_angle(self.angle_at(s))
    }

    /// Entry point and unit-speed chart velocity of the ray leaving the
    /// boundary at `s` with angle `theta` from the counterclockwise tangent.
    pub fn ray(&self, domain: &Domain, metric: &MetricField, s: f64, theta: f64) -> (Vec2, Vec2) {
        let x = self.point_at(domain, s);
        let t = domain.boundary_tangent(&x);
        let n = domain.inward_normal(&x);
        let d = t * theta.cos() + n * theta.sin();
        (x, metric.normalize(&x, &d))
    }
}
