use serde::Serialize;

use crate::geometry::FoliationFunction;
use crate::tiling::Tiling;

/// Edge samples used when maximizing `φ` over a triangle.
const EDGE_SAMPLES: usize = 64;
/// Maxima closer than this share a level.
const LEVEL_MERGE_TOL: f64 = 1e-9;

/// Distinct triangle maxima of `φ`, outermost first, with the triangles
/// attaining each.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerSchedule {
    pub levels: Vec<f64>,
    pub groups: Vec<Vec<usize>>,
}

impl LayerSchedule {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Level index of every triangle.
    pub fn level_of(&self, triangles: usize) -> Vec<usize> {
        let mut out = vec![0; triangles];
        for (j, g) in self.groups.iter().enumerate() {
            for &t in g {
                out[t] = j;
            }
        }
        out
    }
}

/// Maximum of `φ` over triangle `t`, from its corners and sampled edges.
pub fn triangle_max(phi: &FoliationFunction, tiling: &Tiling, t: usize) -> f64 {
    let mut best = tiling
        .corners(t)
        .iter()
        .map(|c| phi.value(c))
        .fold(f64::NEG_INFINITY, f64::max);
    for m in 0..3 {
        for p in tiling.edge_points(t, m, EDGE_SAMPLES) {
            best = best.max(phi.value(&p));
        }
    }
    best
}

pub fn layer_schedule(phi: &FoliationFunction, tiling: &Tiling) -> LayerSchedule {
    let mut maxima: Vec<(f64, usize)> = (0..tiling.len())
        .map(|t| (triangle_max(phi, tiling, t), t))
        .collect();
    maxima.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut levels: Vec<f64> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (m, t) in maxima {
        match levels.last() {
            Some(&top) if top - m <= LEVEL_MERGE_TOL => groups.last_mut().unwrap().push(t),
            _ => {
                levels.push(m);
                groups.push(vec![t]);
            }
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    LayerSchedule { levels, groups }
}
