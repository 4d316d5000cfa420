use std::f64::consts::TAU;

use crate::geometry::MetricField;
use crate::tiling::PiecewiseConstantFunction;
use crate::{Error, Result, Vec2};

/// Classification tolerance when matching a point to vertices and edges.
const FAN_TOL: f64 = 1e-9;

/// Angular sector `[start, end]` in the tangent plane, counterclockwise.
///
/// Angles are chart angles; the metric is conformal, so they coincide with
/// Riemannian angles at the base point. `start ∈ [0, 2π)` and
/// `start < end ≤ start + 2π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sector {
    pub start: f64,
    pub end: f64,
    pub value: f64,
    /// Triangle the sector comes from, if any.
    pub triangle: Option<usize>,
}

impl Sector {
    /// Sector swept counterclockwise from `from` to `to`; collinear opposite
    /// vectors give a half plane and equal directions a full turn.
    pub fn from_vectors(from: &Vec2, to: &Vec2, value: f64) -> Self {
        let start = from[1].atan2(from[0]).rem_euclid(TAU);
        let mut width = (to[1].atan2(to[0]) - from[1].atan2(from[0])).rem_euclid(TAU);
        if width == 0.0 {
            width = TAU;
        }
        Sector {
            start,
            end: start + width,
            value,
            triangle: None,
        }
    }

    pub fn width(&self) -> f64 {
        self.end - self.start
    }

    pub fn start_vector(&self) -> Vec2 {
        Vec2::new(self.start.cos(), self.start.sin())
    }

    pub fn end_vector(&self) -> Vec2 {
        Vec2::new(self.end.cos(), self.end.sin())
    }
}

/// The tangent function `T_x f` as a list of valued sectors.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentFan {
    pub base: Vec2,
    /// `λ` at the base, so chart lengths can be converted to Riemannian ones.
    pub logfactor: f64,
    pub sectors: Vec<Sector>,
}

impl TangentFan {
    pub fn new(base: Vec2, logfactor: f64, mut sectors: Vec<Sector>) -> Self {
        sectors.sort_by(|a, b| a.start.total_cmp(&b.start));
        TangentFan {
            base,
            logfactor,
            sectors,
        }
    }

    pub fn total_angle(&self) -> f64 {
        self.sectors.iter().map(Sector::width).sum()
    }

    /// True when no two sectors overlap in more than a boundary ray.
    pub fn sectors_disjoint(&self, tol: f64) -> bool {
        let n = self.sectors.len();
        if n == 1 {
            return self.sectors[0].width() <= TAU + tol;
        }
        let mut intervals: Vec<(f64, f64)> =
            self.sectors.iter().map(|s| (s.start, s.end)).collect();
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        for k in 0..n {
            let (_, end) = intervals[k];
            let next_start = if k + 1 < n {
                intervals[k + 1].0
            } else {
                intervals[0].0 + TAU
            };
            if end > next_start + tol {
                return false;
            }
        }
        true
    }
}

/// Tangent function of `f` at `x`: the cones of the incident triangles, each
/// carrying that triangle's value.
pub fn tangent_fan(
    f: &PiecewiseConstantFunction,
    metric: &MetricField,
    x: &Vec2,
) -> Result<TangentFan> {
    let tiling = f.tiling();
    let incident = tiling.containing(x, FAN_TOL);
    if incident.is_empty() {
        return Err(Error::OutsideTiling(x[0], x[1]));
    }
    let mut sectors = Vec::with_capacity(incident.len());
    for &t in &incident {
        let value = f.values()[t];
        let tri = &tiling.triangles()[t];
        let p = tiling.corners(t);
        let sector = if let Some(m) = p.iter().position(|c| (c - x).norm() <= FAN_TOL) {
            // corner: from the outgoing edge to the reversed incoming edge
            let out = tiling.edge_direction(t, m, true);
            let back = tiling.edge_direction(t, (m + 2) % 3, false);
            Sector::from_vectors(&out, &back, value)
        } else {
            match (0..3).find(|&m| tiling.depth_in_edge(t, m, x, FAN_TOL)) {
                Some(m) => {
                    let dir = match tri.edges[m] {
                        crate::tiling::EdgeKind::Straight => (p[(m + 1) % 3] - p[m]).normalize(),
                        crate::tiling::EdgeKind::Arc => tiling.domain().boundary_tangent(x),
                    };
                    Sector::from_vectors(&dir, &(-dir), value)
                }
                None => Sector {
                    start: 0.0,
                    end: TAU,
                    value,
                    triangle: None,
                },
            }
        };
        sectors.push(Sector {
            triangle: Some(t),
            ..sector
        });
    }
    Ok(TangentFan::new(*x, metric.logfactor(x), sectors))
}

impl crate::tiling::Tiling {
    /// Whether `x` lies on edge `m` of triangle `t` within `tol`.
    pub(crate) fn depth_in_edge(&self, t: usize, m: usize, x: &Vec2, tol: f64) -> bool {
        let p = self.corners(t);
        match self.triangles()[t].edges[m] {
            crate::tiling::EdgeKind::Straight => {
                crate::tiling::segment_distance(x, &p[m], &p[(m + 1) % 3]) <= tol
            }
            crate::tiling::EdgeKind::Arc => self.domain().inside_distance(x).abs() <= tol,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::PI;

    #[test]
    fn interior_point_gives_full_circle() {
        let t = fixtures::single_ring_tiling();
        let mut values = vec![0.0; 8];
        values[2] = 7.0;
        let f = PiecewiseConstantFunction::new(&t, values).unwrap();
        let fan = tangent_fan(&f, &MetricField::Euclidean, &t.centroid(2)).unwrap();
        assert_eq!(fan.sectors.len(), 1);
        assert_eq!(fan.sectors[0].value, 7.0);
        assert!((fan.sectors[0].width() - TAU).abs() < 1e-15);
    }

    #[test]
    fn interior_vertex_fans_sum_to_full_turn() {
        // the wedge fixture's centre vertex has five incident triangles
        let t = fixtures::wedge_tiling();
        let f = PiecewiseConstantFunction::zero(&t);
        let fan = tangent_fan(&f, &MetricField::Euclidean, &Vec2::zeros()).unwrap();
        assert_eq!(fan.sectors.len(), 5);
        assert!((fan.total_angle() - TAU).abs() < 1e-9);
        assert!(fan.sectors_disjoint(1e-12));
    }

    #[test]
    fn boundary_vertex_fan_spans_half_turn() {
        let t = fixtures::single_ring_tiling();
        let f = PiecewiseConstantFunction::zero(&t);
        let x = t.vertices()[1];
        let fan = tangent_fan(&f, &MetricField::Euclidean, &x).unwrap();
        assert_eq!(fan.sectors.len(), 2);
        assert!((fan.total_angle() - PI).abs() < 1e-3);
        assert!(fan.sectors_disjoint(1e-12));
    }

    #[test]
    fn edge_points_give_two_half_planes() {
        let t = fixtures::two_ring_tiling();
        let f = PiecewiseConstantFunction::zero(&t);
        for (&(i, j), tris) in t.adjacency() {
            let mid = (t.vertices()[i] + t.vertices()[j]) / 2.0;
            let on_arc = tris.len() == 1;
            let x = if on_arc {
                t.domain().boundary_point_at_angle(mid[1].atan2(mid[0]))
            } else {
                mid
            };
            let fan = tangent_fan(&f, &MetricField::Euclidean, &x).unwrap();
            assert_eq!(fan.sectors.len(), tris.len());
            for s in &fan.sectors {
                assert!((s.width() - PI).abs() < 1e-12);
            }
        }
    }
}
