//! Regular triangulations of a convex domain.
//!
//! Interior edges are straight chart segments; edges on `∂M` are boundary
//! arcs. A triangle with an arc edge is the wedge at its apex (the vertex
//! opposite the arc) intersected with the domain.

mod fan;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geometry::Domain;
use crate::{Error, Result, Vec2};

pub use fan::{tangent_fan, Sector, TangentFan};
pub use validate::{validate_tiling, TilingReport, Violation, ViolationKind};

/// Distance below which a point counts as lying on the skeleton.
pub const SKELETON_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Straight,
    Arc,
}

/// Edge `m` joins `v[m]` to `v[(m + 1) % 3]`; vertices are counterclockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Triangle {
    pub v: [usize; 3],
    pub edges: [EdgeKind; 3],
}

impl Triangle {
    /// Triangle with three straight edges.
    pub fn straight(v: [usize; 3]) -> Self {
        Triangle {
            v,
            edges: [EdgeKind::Straight; 3],
        }
    }

    pub fn arc_edge(&self) -> Option<usize> {
        self.edges.iter().position(|&e| e == EdgeKind::Arc)
    }
}

/// Unit normal `n` and offset `c` of a directed edge line: `n·x − c` is the
/// signed distance, positive on the interior side.
#[derive(Clone, Copy, Debug)]
struct HalfPlane {
    n: Vec2,
    c: f64,
}

impl HalfPlane {
    fn through(a: &Vec2, b: &Vec2) -> Self {
        let d = (b - a).normalize();
        let n = Vec2::new(-d[1], d[0]);
        HalfPlane { n, c: n.dot(a) }
    }

    fn distance(&self, x: &Vec2) -> f64 {
        self.n.dot(x) - self.c
    }
}

#[derive(Clone, Debug)]
struct TriangleGeometry {
    planes: Vec<HalfPlane>,
    arc: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Triangle(usize),
    OnSkeleton,
}

#[derive(Clone, Debug)]
pub struct Tiling {
    vertices: Vec<Vec2>,
    triangles: Vec<Triangle>,
    geometry: Vec<TriangleGeometry>,
    adjacency: BTreeMap<(usize, usize), Vec<usize>>,
    domain: Domain,
}

impl Tiling {
    /// Builds a tiling, reorienting clockwise triangles.
    pub fn new(vertices: Vec<Vec2>, triangles: Vec<Triangle>, domain: Domain) -> Result<Self> {
        let mut tris = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.into_iter().enumerate() {
            if tri.v.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::invalid(format!(
                    "triangle {t} references a missing vertex"
                )));
            }
            if tri.v[0] == tri.v[1] || tri.v[1] == tri.v[2] || tri.v[0] == tri.v[2] {
                return Err(Error::invalid(format!("triangle {t} repeats a vertex")));
            }
            if tri.edges.iter().filter(|&&e| e == EdgeKind::Arc).count() > 1 {
                return Err(Error::invalid(format!(
                    "triangle {t} has more than one boundary arc"
                )));
            }
            let [a, b, c] = tri.v.map(|i| vertices[i]);
            let area2 = (b - a).perp(&(c - a));
            if area2.abs() < 1e-14 {
                return Err(Error::invalid(format!("triangle {t} is degenerate")));
            }
            if area2 > 0.0 {
                tris.push(tri);
            } else {
                tris.push(Triangle {
                    v: [tri.v[0], tri.v[2], tri.v[1]],
                    edges: [tri.edges[2], tri.edges[1], tri.edges[0]],
                });
            }
        }
        let geometry = tris
            .iter()
            .map(|tri| {
                let p = tri.v.map(|i| vertices[i]);
                let planes = (0..3)
                    .filter(|&m| tri.edges[m] == EdgeKind::Straight)
                    .map(|m| HalfPlane::through(&p[m], &p[(m + 1) % 3]))
                    .collect();
                TriangleGeometry {
                    planes,
                    arc: tri.arc_edge(),
                }
            })
            .collect();
        let mut adjacency: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (t, tri) in tris.iter().enumerate() {
            for m in 0..3 {
                let (i, j) = (tri.v[m], tri.v[(m + 1) % 3]);
                adjacency.entry((i.min(j), i.max(j))).or_default().push(t);
            }
        }
        Ok(Tiling {
            vertices,
            triangles: tris,
            geometry,
            adjacency,
            domain,
        })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Edge (as a sorted vertex pair) to the triangles that contain it.
    pub fn adjacency(&self) -> &BTreeMap<(usize, usize), Vec<usize>> {
        &self.adjacency
    }

    pub fn corners(&self, t: usize) -> [Vec2; 3] {
        self.triangles[t].v.map(|i| self.vertices[i])
    }

    /// Centroid of the three corners; always interior.
    pub fn centroid(&self, t: usize) -> Vec2 {
        let [a, b, c] = self.corners(t);
        (a + b + c) / 3.0
    }

    /// Signed distance-like margin of `x` in triangle `t`: positive inside,
    /// zero on the triangle boundary, negative outside.
    pub fn margin(&self, t: usize, x: &Vec2) -> f64 {
        let g = &self.geometry[t];
        let mut m = g
            .planes
            .iter()
            .map(|p| p.distance(x))
            .fold(f64::INFINITY, f64::min);
        if g.arc.is_some() {
            m = m.min(self.domain.inside_distance(x));
        }
        m
    }

    /// Triangle with the largest margin at `x`.
    pub fn best_triangle(&self, x: &Vec2) -> (usize, f64) {
        (0..self.len())
            .map(|t| (t, self.margin(t, x)))
            .fold((0, f64::NEG_INFINITY), |acc, cur| {
                if cur.1 > acc.1 {
                    cur
                } else {
                    acc
                }
            })
    }

    pub fn locate(&self, x: &Vec2) -> Result<Location> {
        let (t, m) = self.best_triangle(x);
        if m > SKELETON_TOL {
            Ok(Location::Triangle(t))
        } else if m >= -SKELETON_TOL {
            Ok(Location::OnSkeleton)
        } else {
            Err(Error::OutsideTiling(x[0], x[1]))
        }
    }

    /// Triangles whose closure contains `x` within `tol`.
    pub fn containing(&self, x: &Vec2, tol: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&t| self.margin(t, x) >= -tol)
            .collect()
    }

    /// Depth of `x` within triangle `t` (which must contain it within `tol`).
    pub fn depth_in(&self, t: usize, x: &Vec2, tol: f64) -> u8 {
        let p = self.corners(t);
        if p.iter().any(|c| (c - x).norm() <= tol) {
            return 2;
        }
        let tri = &self.triangles[t];
        for m in 0..3 {
            let d = match tri.edges[m] {
                EdgeKind::Straight => segment_distance(x, &p[m], &p[(m + 1) % 3]),
                EdgeKind::Arc => self.domain.inside_distance(x).abs(),
            };
            if d <= tol {
                return 1;
            }
        }
        0
    }

    /// Depth of `x` in the tiling: 0 interior, 1 open edge, 2 vertex.
    pub fn depth(&self, x: &Vec2, tol: f64) -> Result<u8> {
        let ts = self.containing(x, tol);
        if ts.is_empty() {
            return Err(Error::OutsideTiling(x[0], x[1]));
        }
        Ok(ts.iter().map(|&t| self.depth_in(t, x, tol)).max().unwrap())
    }

    /// `n + 1` points along edge `m` of triangle `t`, from `v[m]` to `v[m+1]`.
    pub fn edge_points(&self, t: usize, m: usize, n: usize) -> Vec<Vec2> {
        let tri = &self.triangles[t];
        let p = self.corners(t);
        let (a, b) = (p[m], p[(m + 1) % 3]);
        let apex = p[(m + 2) % 3];
        (0..=n)
            .map(|k| {
                let u = k as f64 / n as f64;
                let q = a + (b - a) * u;
                match tri.edges[m] {
                    EdgeKind::Straight => q,
                    EdgeKind::Arc if k == 0 => a,
                    EdgeKind::Arc if k == n => b,
                    EdgeKind::Arc => self.domain.ray_to_boundary(&apex, &(q - apex)),
                }
            })
            .collect()
    }

    /// Chart tangent of edge `m` at parameter end `at_start`, pointing into the edge.
    pub fn edge_direction(&self, t: usize, m: usize, at_start: bool) -> Vec2 {
        let tri = &self.triangles[t];
        let p = self.corners(t);
        let (a, b) = (p[m], p[(m + 1) % 3]);
        match (tri.edges[m], at_start) {
            (EdgeKind::Straight, true) => (b - a).normalize(),
            (EdgeKind::Straight, false) => (a - b).normalize(),
            (EdgeKind::Arc, true) => self.domain.boundary_tangent(&a),
            (EdgeKind::Arc, false) => -self.domain.boundary_tangent(&b),
        }
    }

    /// Chart area; arc triangles use a fine boundary polygon.
    pub fn area(&self, t: usize) -> f64 {
        let tri = &self.triangles[t];
        let poly: Vec<Vec2> = match tri.arc_edge() {
            None => self.corners(t).to_vec(),
            Some(m) => {
                let mut pts = self.edge_points(t, m, 512);
                pts.push(self.vertices[tri.v[(m + 2) % 3]]);
                pts
            }
        };
        polygon_area(&poly)
    }

    pub fn to_file(&self) -> TilingFile {
        TilingFile {
            vertices: self.vertices.iter().map(|v| [v[0], v[1]]).collect(),
            triangles: self
                .triangles
                .iter()
                .map(|t| TriangleRecord {
                    v: t.v,
                    edges: Some(t.edges.to_vec()),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &TilingFile, domain: Domain) -> Result<Self> {
        let vertices = file
            .vertices
            .iter()
            .map(|v| Vec2::new(v[0], v[1]))
            .collect();
        let triangles = file
            .triangles
            .iter()
            .map(|t| {
                let edges = match &t.edges {
                    None => [EdgeKind::Straight; 3],
                    Some(e) if e.len() == 3 => [e[0], e[1], e[2]],
                    Some(_) => return Err(Error::invalid("each triangle needs three edge kinds")),
                };
                Ok(Triangle { v: t.v, edges })
            })
            .collect::<Result<Vec<_>>>()?;
        Tiling::new(vertices, triangles, domain)
    }
}

pub(crate) fn segment_distance(x: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    let d = b - a;
    let t = ((x - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
    (a + d * t - x).norm()
}

pub(crate) fn polygon_area(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    0.5 * (0..n).map(|i| pts[i].perp(&pts[(i + 1) % n])).sum::<f64>()
}

/// On-disk tiling: `{vertices: [[x, y], ...], triangles: [{v: [i, j, k], edges: [...]}, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TilingFile {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<TriangleRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TriangleRecord {
    pub v: [usize; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<EdgeKind>>,
}

/// A function constant on each triangle interior and zero on the skeleton.
#[derive(Clone, Debug)]
pub struct PiecewiseConstantFunction<'t> {
    tiling: &'t Tiling,
    values: Vec<f64>,
}

impl<'t> PiecewiseConstantFunction<'t> {
    pub fn new(tiling: &'t Tiling, values: Vec<f64>) -> Result<Self> {
        if values.len() != tiling.len() {
            return Err(Error::invalid(format!(
                "{} values for {} triangles",
                values.len(),
                tiling.len()
            )));
        }
        Ok(PiecewiseConstantFunction { tiling, values })
    }

    pub fn zero(tiling: &'t Tiling) -> Self {
        PiecewiseConstantFunction {
            tiling,
            values: vec![0.0; tiling.len()],
        }
    }

    pub fn tiling(&self) -> &'t Tiling {
        self.tiling
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn evaluate(&self, x: &Vec2) -> Result<f64> {
        Ok(match self.tiling.locate(x)? {
            Location::Triangle(t) => self.values[t],
            Location::OnSkeleton => 0.0,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
