//! Canonical unit-disk scenes and meshes used by tests and the CLI.

use std::f64::consts::PI;

use crate::geometry::{Domain, FoliationFunction, MetricField};
use crate::scene::Scene;
use crate::tiling::{EdgeKind, Tiling, Triangle};
use crate::Vec2;

const S: EdgeKind = EdgeKind::Straight;
const A: EdgeKind = EdgeKind::Arc;

fn polar(r: f64, angle: f64) -> Vec2 {
    Vec2::new(r * angle.cos(), r * angle.sin())
}

pub fn euclidean_scene() -> Scene {
    Scene {
        metric: MetricField::Euclidean,
        domain: Domain::unit_disk(),
        foliation: FoliationFunction::radial_quadratic(),
    }
}

/// Unit disk with `λ(x) = |x|²/4`.
pub fn conformal_scene() -> Scene {
    Scene {
        metric: MetricField::ConformalRadial {
            coeffs: vec![0.0, 0.25],
        },
        domain: Domain::unit_disk(),
        foliation: FoliationFunction::radial_quadratic(),
    }
}

/// Eight triangles fanning out from the centre, each with one boundary arc.
pub fn single_ring_tiling() -> Tiling {
    let mut verts = vec![Vec2::zeros()];
    verts.extend((0..8).map(|k| polar(1.0, k as f64 * PI / 4.0)));
    let tris = (0..8)
        .map(|k| Triangle {
            v: [0, 1 + k, 1 + (k + 1) % 8],
            edges: [S, A, S],
        })
        .collect();
    Tiling::new(verts, tris, Domain::unit_disk()).unwrap()
}

/// Eight inner triangles inside radius 1/2 (indices 0..8) and a ring of
/// sixteen triangles reaching the boundary (indices 8..24).
pub fn two_ring_tiling() -> Tiling {
    let mut verts = vec![Vec2::zeros()];
    verts.extend((0..8).map(|k| polar(0.5, k as f64 * PI / 4.0)));
    verts.extend((0..8).map(|k| polar(1.0, k as f64 * PI / 4.0)));
    let inner = |k: usize| 1 + k % 8;
    let outer = |k: usize| 9 + k % 8;
    let mut tris: Vec<Triangle> = (0..8)
        .map(|k| Triangle {
            v: [0, inner(k), inner(k + 1)],
            edges: [S; 3],
        })
        .collect();
    for k in 0..8 {
        tris.push(Triangle {
            v: [inner(k), outer(k), outer(k + 1)],
            edges: [S, A, S],
        });
        tris.push(Triangle {
            v: [inner(k), outer(k + 1), inner(k + 1)],
            edges: [S; 3],
        });
    }
    Tiling::new(verts, tris, Domain::unit_disk()).unwrap()
}

/// Boundary vertex of the wedge fixture.
pub const WEDGE_CORNER: usize = 0;

/// Triangle 0 is the straight wedge with apex `(0, -1)` and sides at ±45°
/// from the inward normal; the rest tile the remaining disk.
pub fn wedge_tiling() -> Tiling {
    let deg = PI / 180.0;
    let verts = vec![
        Vec2::new(0.0, -1.0),    // x0
        Vec2::new(0.5, -0.5),    // P
        Vec2::new(-0.5, -0.5),   // Q
        polar(1.0, -20.0 * deg), // A
        polar(1.0, 200.0 * deg), // B
        Vec2::zeros(),           // O
        Vec2::new(0.0, 1.0),     // C
    ];
    let tris = vec![
        Triangle {
            v: [0, 1, 2],
            edges: [S; 3],
        },
        Triangle {
            v: [0, 3, 1],
            edges: [A, S, S],
        },
        Triangle {
            v: [4, 0, 2],
            edges: [A, S, S],
        },
        Triangle {
            v: [1, 3, 5],
            edges: [S; 3],
        },
        Triangle {
            v: [2, 5, 4],
            edges: [S; 3],
        },
        Triangle {
            v: [1, 5, 2],
            edges: [S; 3],
        },
        Triangle {
            v: [3, 6, 5],
            edges: [A, S, S],
        },
        Triangle {
            v: [6, 4, 5],
            edges: [A, S, S],
        },
    ];
    Tiling::new(verts, tris, Domain::unit_disk()).unwrap()
}

/// Values for the wedge fixture: one on the wedge, zero elsewhere.
pub fn wedge_values() -> Vec<f64> {
    let mut v = vec![0.0; 8];
    v[0] = 1.0;
    v
}

/// Two triangles where a vertex of one sits at the midpoint of an edge of
/// the other.
pub fn t_junction() -> (Tiling, Domain) {
    let d = Domain::disk(10.0).unwrap();
    let verts = vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(2.0, 0.0),
        Vec2::new(0.0, 2.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.5, -1.0),
    ];
    let tris = vec![
        Triangle {
            v: [0, 1, 2],
            edges: [S; 3],
        },
        Triangle {
            v: [3, 4, 1],
            edges: [S; 3],
        },
    ];
    (Tiling::new(verts, tris, d.clone()).unwrap(), d)
}
