//! SVG pictures of terrains, candidates, guards and visibility regions.

use std::fmt::Write as _;

use crate::discretization::GuardCandidate;
use crate::scalar::Scalar;
use crate::terrain::{Location, Terrain, TerrainPoint};
use crate::visibility::VisibilityRegion;

/// What to draw on top of the terrain.
pub struct Layers<'a, S> {
    pub candidates: Option<&'a [GuardCandidate<S>]>,
    pub solution: Option<&'a [TerrainPoint<S>]>,
    pub regions: &'a [VisibilityRegion<S>],
}

impl<S> Default for Layers<'_, S> {
    fn default() -> Self {
        Layers {
            candidates: None,
            solution: None,
            regions: &[],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Style {
    pub width_px: f64,
    pub terrain_color: String,
    pub vertex_color: String,
    pub interior_color: String,
    pub guard_color: String,
    pub region_color: String,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            width_px: 800.0,
            terrain_color: "#333333".into(),
            vertex_color: "#1f77b4".into(),
            interior_color: "#ff7f0e".into(),
            guard_color: "#d62728".into(),
            region_color: "#2ca02c".into(),
        }
    }
}

/// Formats `v` with at most 6 significant digits.
fn num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let rounded: f64 = format!("{v:.5e}").parse().unwrap_or(v);
    if rounded == 0.0 {
        "0".into()
    } else {
        rounded.to_string()
    }
}

fn xy<S: Scalar>(p: &TerrainPoint<S>) -> (f64, f64) {
    (p.x().to_f64(), -p.y().to_f64())
}

/// Chain from `lo` to `hi` as SVG points, flipped to screen orientation.
fn chain_points<S: Scalar>(
    terrain: &Terrain<S>,
    lo: &TerrainPoint<S>,
    hi: &TerrainPoint<S>,
) -> String {
    let mut pts = vec![xy(lo)];
    let first = match lo.location {
        Location::Vertex(i) | Location::Edge(i) => i + 1,
    };
    let last = match hi.location {
        Location::Vertex(j) => j,
        Location::Edge(j) => j + 1,
    };
    for i in first..last {
        pts.push(xy(&terrain.vertex_point(i)));
    }
    if lo != hi {
        pts.push(xy(hi));
    }
    pts.iter()
        .map(|(x, y)| format!("{},{}", num(*x), num(*y)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_svg<S: Scalar>(
    terrain: &Terrain<S>,
    layers: &Layers<'_, S>,
    style: &Style,
) -> String {
    let xs: Vec<f64> = terrain.vertices().iter().map(|v| v.x.to_f64()).collect();
    let ys: Vec<f64> = terrain.vertices().iter().map(|v| -v.y.to_f64()).collect();
    let (x0, x1) = (xs[0], xs[xs.len() - 1]);
    let y0 = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let y1 = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (w, h) = (x1 - x0, y1 - y0);
    let extent = w.max(h);
    let mx = 0.05 * if w > 0.0 { w } else { extent };
    let my = 0.05 * if h > 0.0 { h } else { extent };
    let (vx, vy, vw, vh) = (x0 - mx, y0 - my, w + 2.0 * mx, h + 2.0 * my);
    let height_px = style.width_px * vh / vw;
    let r = 0.006 * extent;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        num(style.width_px),
        num(height_px),
        num(vx),
        num(vy),
        num(vw),
        num(vh)
    );

    for region in layers.regions {
        let _ = writeln!(
            s,
            r#"  <g class="region" stroke="{}" stroke-opacity="0.35" stroke-width="8" fill="none" stroke-linecap="round" vector-effect="non-scaling-stroke">"#,
            style.region_color
        );
        for iv in &region.intervals {
            let _ = writeln!(
                s,
                r#"    <polyline points="{}" vector-effect="non-scaling-stroke"/>"#,
                chain_points(terrain, &iv.lo, &iv.hi)
            );
        }
        s.push_str("  </g>\n");
    }

    let all = chain_points(
        terrain,
        &terrain.vertex_point(0),
        &terrain.vertex_point(terrain.len() - 1),
    );
    let _ = writeln!(
        s,
        r#"  <polyline class="terrain" points="{all}" fill="none" stroke="{}" stroke-width="1.5" vector-effect="non-scaling-stroke"/>"#,
        style.terrain_color
    );

    if let Some(candidates) = layers.candidates {
        s.push_str("  <g class=\"candidates\">\n");
        for c in candidates {
            let (x, y) = xy(&c.location);
            let color = if c.is_vertex() {
                &style.vertex_color
            } else {
                &style.interior_color
            };
            let _ = writeln!(
                s,
                r#"    <circle cx="{}" cy="{}" r="{}" fill="{color}"/>"#,
                num(x),
                num(y),
                num(r)
            );
        }
        s.push_str("  </g>\n");
    }

    if let Some(guards) = layers.solution {
        s.push_str("  <g class=\"solution\">\n");
        for g in guards {
            let (x, y) = xy(g);
            let _ = writeln!(
                s,
                r#"    <circle cx="{}" cy="{}" r="{}" fill="none" stroke="{}" stroke-width="2" vector-effect="non-scaling-stroke"/>"#,
                num(x),
                num(y),
                num(2.0 * r),
                style.guard_color
            );
        }
        s.push_str("  </g>\n");
    }
    s.push_str("</svg>\n");
    s
}
