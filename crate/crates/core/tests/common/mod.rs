//! Oracles shared by the integration tests.

use xrt_core::tiling::{EdgeKind, Tiling};
use xrt_core::Vec2;

/// Length of the line `p + t·d` (|d| = 1) inside triangle `k`, clipped
/// against its straight edges (Cyrus–Beck) and the unit disk.
pub fn clipped_length(tiling: &Tiling, k: usize, p: &Vec2, d: &Vec2) -> f64 {
    // unit disk: |p + t d|² = 1
    let b = p.dot(d);
    let disc = b * b - (p.norm_squared() - 1.0);
    if disc <= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (-b - disc.sqrt(), -b + disc.sqrt());
    let tri = &tiling.triangles()[k];
    let c = tiling.corners(k);
    let arc = tri.edges.iter().position(|e| *e == EdgeKind::Arc);
    for m in 0..3 {
        // an arc triangle is the wedge at the opposite vertex; the arc is handled below
        if Some(m) == arc {
            continue;
        }
        let (a, e) = (c[m], c[(m + 1) % 3]);
        let edge = e - a;
        let inward = Vec2::new(-edge[1], edge[0]); // ccw orientation
        let num = inward.dot(&(p - a));
        let den = inward.dot(d);
        if den.abs() < 1e-300 {
            if num < 0.0 {
                return 0.0;
            }
            continue;
        }
        let t = -num / den;
        if den > 0.0 {
            lo = lo.max(t);
        } else {
            hi = hi.min(t);
        }
    }
    if let Some(m) = arc {
        // wedge edges from the apex through the arc endpoints extend past them
        let apex = c[(m + 2) % 3];
        for (a, e) in [(apex, c[m]), (c[(m + 1) % 3], apex)] {
            let edge = e - a;
            let inward = Vec2::new(-edge[1], edge[0]);
            let den = inward.dot(d);
            let num = inward.dot(&(p - a));
            if den.abs() < 1e-300 {
                continue;
            }
            let t = -num / den;
            if den > 0.0 {
                lo = lo.max(t);
            } else {
                hi = hi.min(t);
            }
        }
    }
    (hi - lo).max(0.0)
}
