//! Deterministic SVG output of a domain, its tiling and traced rays.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use xrt_core::geometry::{Domain, DomainKind, GeodesicPath};
use xrt_core::tiling::Tiling;
use xrt_core::Vec2;

pub const CANVAS: f64 = 800.0;
const PADDING: f64 = 20.0;
const ARC_SEGMENTS: usize = 32;
const BOUNDARY_SEGMENTS: usize = 720;
/// Every this many integrator samples go into a ray polyline.
const RAY_STRIDE: usize = 8;

/// Chart-to-pixel map: uniform scale, y up, origin at the canvas centre.
#[derive(Clone, Copy, Debug)]
pub struct Viewport {
    pub scale: f64,
}

impl Viewport {
    pub fn fit(domain: &Domain) -> Self {
        Viewport {
            scale: (CANVAS / 2.0 - PADDING) / domain.max_radius(),
        }
    }

    pub fn px(&self, x: &Vec2) -> (f64, f64) {
        (
            CANVAS / 2.0 + self.scale * x[0],
            CANVAS / 2.0 - self.scale * x[1],
        )
    }
}

fn color(value: f64, max_abs: f64) -> String {
    if max_abs == 0.0 {
        return "#ffffff".into();
    }
    let t = (value / max_abs).clamp(-1.0, 1.0);
    let fade = (255.0 * (1.0 - t.abs())).round() as u8;
    if t >= 0.0 {
        format!("#ff{fade:02x}{fade:02x}")
    } else {
        format!("#{fade:02x}{fade:02x}ff")
    }
}

fn path_data(points: &[Vec2], view: &Viewport, close: bool) -> String {
    let mut d = String::new();
    for (k, p) in points.iter().enumerate() {
        let (x, y) = view.px(p);
        let _ = write!(d, "{}{x:.3} {y:.3}", if k == 0 { "M" } else { " L" });
    }
    if close {
        d.push_str(" Z");
    }
    d
}

fn triangle_outline(tiling: &Tiling, t: usize) -> Vec<Vec2> {
    let mut pts = Vec::new();
    for m in 0..3 {
        let edge = tiling.edge_points(t, m, ARC_SEGMENTS);
        let keep = if tiling.triangles()[t].edges[m] == xrt_core::tiling::EdgeKind::Straight {
            vec![edge[0]]
        } else {
            edge[..ARC_SEGMENTS].to_vec()
        };
        pts.extend(keep);
    }
    pts
}

pub fn render_svg(
    domain: &Domain,
    tiling: &Tiling,
    values: Option<&[f64]>,
    rays: &[GeodesicPath],
) -> String {
    let view = Viewport::fit(domain);
    let max_abs = values.map_or(0.0, |v| v.iter().fold(0.0f64, |m, x| m.max(x.abs())));
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    );
    let _ = writeln!(
        out,
        r##"<rect width="100%" height="100%" fill="#f8f8f8"/>"##
    );
    let _ = writeln!(
        out,
        r##"<g id="tiling" stroke="#404040" stroke-width="0.8">"##
    );
    for t in 0..tiling.len() {
        let fill = values.map_or_else(|| "#ffffff".to_string(), |v| color(v[t], max_abs));
        let value = values.map_or(String::new(), |v| format!(r#" data-value="{:e}""#, v[t]));
        let _ = writeln!(
            out,
            r#"<path class="triangle" data-index="{t}"{value} fill="{fill}" d="{}"/>"#,
            path_data(&triangle_outline(tiling, t), &view, true)
        );
    }
    let _ = writeln!(out, "</g>");
    match domain.kind() {
        DomainKind::Disk { radius } => {
            let (cx, cy) = view.px(&Vec2::zeros());
            let _ = writeln!(
                out,
                r#"<circle id="boundary" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#,
                radius * view.scale
            );
        }
        _ => {
            let pts: Vec<Vec2> = (0..BOUNDARY_SEGMENTS)
                .map(|k| domain.boundary_point_at_angle(TAU * k as f64 / BOUNDARY_SEGMENTS as f64))
                .collect();
            let _ = writeln!(
                out,
                r#"<path id="boundary" fill="none" stroke="black" stroke-width="1.5" d="{}"/>"#,
                path_data(&pts, &view, true)
            );
        }
    }
    if !rays.is_empty() {
        let _ = writeln!(
            out,
            r##"<g id="rays" fill="none" stroke="#2a7f2a" stroke-width="0.7">"##
        );
        for path in rays {
            let n = path.samples.len();
            let mut pts: Vec<Vec2> = path
                .samples
                .iter()
                .step_by(RAY_STRIDE)
                .map(|s| s.point)
                .collect();
            if (n - 1) % RAY_STRIDE != 0 {
                pts.push(path.samples[n - 1].point);
            }
            let list: Vec<String> = pts
                .iter()
                .map(|p| {
                    let (x, y) = view.px(p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline class="ray" points="{}"/>"#,
                list.join(" ")
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}
