use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{Domain, BOUNDARY_TOL};
use crate::tiling::{EdgeKind, Tiling, SKELETON_TOL};
use crate::Vec2;

const DEPTH_TOL: f64 = 1e-9;
const TANGENCY_TOL: f64 = 1e-6;
const MAX_REPORTED_MISSES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Adjacency,
    DisjointInteriors,
    DepthConsistency,
    Coverage,
    ArcOffBoundary,
    TangentEdge,
    VertexOutside,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub triangles: Vec<usize>,
    pub location: [f64; 2],
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TilingReport {
    pub violations: Vec<Violation>,
    pub coverage_samples: usize,
    pub coverage_misses: usize,
}

impl TilingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, triangles: Vec<usize>, at: Vec2, detail: String) {
        self.violations.push(Violation {
            kind,
            triangles,
            location: [at[0], at[1]],
            detail,
        });
    }
}

/// Checks the tiling axioms: edge adjacency, disjoint interiors, equal depth
/// of shared points, arcs on `∂M`, no interior edge tangent to `∂M`, and
/// Monte Carlo coverage of the domain with `samples` points (0 skips it).
pub fn validate_tiling(
    tiling: &Tiling,
    domain: &Domain,
    samples: usize,
    seed: u64,
) -> TilingReport {
    let mut report = TilingReport::default();
    check_vertices(tiling, domain, &mut report);
    check_adjacency(tiling, &mut report);
    check_overlaps(tiling, &mut report);
    check_depth(tiling, &mut report);
    check_arcs(tiling, domain, &mut report);
    check_tangency(tiling, domain, &mut report);
    if samples > 0 {
        check_coverage(tiling, domain, samples, seed, &mut report);
    }
    report
}

fn check_vertices(tiling: &Tiling, domain: &Domain, report: &mut TilingReport) {
    for (i, v) in tiling.vertices().iter().enumerate() {
        if domain.b(v) > BOUNDARY_TOL {
            report.push(
                ViolationKind::VertexOutside,
                vec![],
                *v,
                format!("vertex {i}"),
            );
        }
    }
}

fn check_adjacency(tiling: &Tiling, report: &mut TilingReport) {
    for (&(i, j), tris) in tiling.adjacency() {
        let at = (tiling.vertices()[i] + tiling.vertices()[j]) / 2.0;
        let kinds: Vec<EdgeKind> = tris
            .iter()
            .map(|&t| {
                let tri = &tiling.triangles()[t];
                let m = (0..3)
                    .find(|&m| {
                        let (a, b) = (tri.v[m], tri.v[(m + 1) % 3]);
                        (a.min(b), a.max(b)) == (i, j)
                    })
                    .unwrap();
                tri.edges[m]
            })
            .collect();
        let arcs = kinds.iter().filter(|&&k| k == EdgeKind::Arc).count();
        let bad = !matches!((tris.len(), arcs), (1, _) | (2, 0));
        if bad {
            report.push(
                ViolationKind::Adjacency,
                tris.clone(),
                at,
                format!("edge {i}-{j} in {} triangles ({arcs} arcs)", tris.len()),
            );
        }
    }
}

fn straight_edges(tiling: &Tiling, t: usize) -> Vec<(Vec2, Vec2)> {
    let tri = &tiling.triangles()[t];
    let p = tiling.corners(t);
    (0..3)
        .filter(|&m| tri.edges[m] == EdgeKind::Straight)
        .map(|m| (p[m], p[(m + 1) % 3]))
        .collect()
}

/// Crossing of two segments at a point interior to both.
fn segments_cross(a: &(Vec2, Vec2), b: &(Vec2, Vec2)) -> Option<Vec2> {
    let r = a.1 - a.0;
    let s = b.1 - b.0;
    let denom = r.perp(&s);
    if denom.abs() < 1e-14 * r.norm() * s.norm() {
        return None;
    }
    let q = b.0 - a.0;
    let t = q.perp(&s) / denom;
    let u = q.perp(&r) / denom;
    let eps = 1e-9;
    (t > eps && t < 1.0 - eps && u > eps && u < 1.0 - eps).then(|| a.0 + r * t)
}

fn check_overlaps(tiling: &Tiling, report: &mut TilingReport) {
    let n = tiling.len();
    let edges: Vec<_> = (0..n).map(|t| straight_edges(tiling, t)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let crossing = edges[i]
                .iter()
                .flat_map(|ea| edges[j].iter().map(move |eb| (ea, eb)))
                .find_map(|(ea, eb)| segments_cross(ea, eb));
            let ci = tiling.centroid(i);
            let cj = tiling.centroid(j);
            let at = if let Some(x) = crossing {
                Some(x)
            } else if tiling.margin(j, &ci) > SKELETON_TOL {
                Some(ci)
            } else if tiling.margin(i, &cj) > SKELETON_TOL {
                Some(cj)
            } else {
                None
            };
            if let Some(x) = at {
                report.push(
                    ViolationKind::DisjointInteriors,
                    vec![i, j],
                    x,
                    format!("triangles {i} and {j} overlap"),
                );
            }
        }
    }
}

fn check_depth(tiling: &Tiling, report: &mut TilingReport) {
    for (vi, v) in tiling.vertices().iter().enumerate() {
        for t in tiling.containing(v, DEPTH_TOL) {
            let d = tiling.depth_in(t, v, DEPTH_TOL);
            if d != 2 {
                report.push(
                    ViolationKind::DepthConsistency,
                    vec![t],
                    *v,
                    format!("vertex {vi} has depth {d} in triangle {t}"),
                );
            }
        }
    }
    for (&(i, j), tris) in tiling.adjacency() {
        let t0 = tris[0];
        let tri = &tiling.triangles()[t0];
        let m = (0..3)
            .find(|&m| {
                let (a, b) = (tri.v[m], tri.v[(m + 1) % 3]);
                (a.min(b), a.max(b)) == (i, j)
            })
            .unwrap();
        for q in tiling.edge_points(t0, m, 4).into_iter().skip(1).take(3) {
            for t in tiling.containing(&q, DEPTH_TOL) {
                let d = tiling.depth_in(t, &q, DEPTH_TOL);
                if d != 1 {
                    report.push(
                        ViolationKind::DepthConsistency,
                        vec![t0, t],
                        q,
                        format!("point on edge {i}-{j} has depth {d} in triangle {t}"),
                    );
                }
            }
        }
    }
}

fn check_arcs(tiling: &Tiling, domain: &Domain, report: &mut TilingReport) {
    for (t, tri) in tiling.triangles().iter().enumerate() {
        let Some(m) = tri.arc_edge() else { continue };
        for q in tiling.edge_points(t, m, 16) {
            if domain.b(&q).abs() > BOUNDARY_TOL {
                report.push(
                    ViolationKind::ArcOffBoundary,
                    vec![t],
                    q,
                    format!(
                        "arc of triangle {t} leaves the boundary (b = {:e})",
                        domain.b(&q)
                    ),
                );
                break;
            }
        }
    }
}

fn check_tangency(tiling: &Tiling, domain: &Domain, report: &mut TilingReport) {
    for (t, tri) in tiling.triangles().iter().enumerate() {
        let p = tiling.corners(t);
        for m in 0..3 {
            if tri.edges[m] != EdgeKind::Straight {
                continue;
            }
            for (a, b) in [(p[m], p[(m + 1) % 3]), (p[(m + 1) % 3], p[m])] {
                if !domain.on_boundary(&a) {
                    continue;
                }
                let dir = (b - a).normalize();
                if dir.dot(&domain.inward_normal(&a)).abs() < TANGENCY_TOL {
                    report.push(
                        ViolationKind::TangentEdge,
                        vec![t],
                        a,
                        format!("edge {m} of triangle {t} is tangent to the boundary"),
                    );
                }
            }
        }
    }
}

fn check_coverage(
    tiling: &Tiling,
    domain: &Domain,
    samples: usize,
    seed: u64,
    report: &mut TilingReport,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = domain.max_radius();
    let mut drawn = 0;
    while drawn < samples {
        let x = Vec2::new(rng.gen_range(-r..r), rng.gen_range(-r..r));
        if domain.b(&x) >= 0.0 {
            continue;
        }
        drawn += 1;
        if tiling.best_triangle(&x).1 < -SKELETON_TOL {
            report.coverage_misses += 1;
            if report.coverage_misses <= MAX_REPORTED_MISSES {
                report.push(
                    ViolationKind::Coverage,
                    vec![],
                    x,
                    "point not covered".into(),
                );
            }
        }
    }
    report.coverage_samples = drawn;
}
