//! SVG outlines of planar bodies.

use std::f64::consts::PI;
use std::fmt::Write as _;

use orliczkit::sphere::planar;
use orliczkit::{Body, Result};

/// Stroke colors, in layer order.
pub const PALETTE: [&str; 4] = ["#1f4e79", "#c55a11", "#2e7d32", "#7b1fa2"];

const SAMPLES: usize = 720;
const SIZE: f64 = 480.0;

/// Boundary of a planar body as a closed point list.
pub fn outline(body: &Body) -> Result<Vec<[f64; 2]>> {
    if let Some(p) = body.as_polygon() {
        return Ok(p.vertices().iter().map(|v| [v.x, v.y]).collect());
    }
    (0..SAMPLES)
        .map(|j| {
            let u = planar(2.0 * PI * j as f64 / SAMPLES as f64);
            let r = body.radial(&u)?;
            Ok([r * u.x, r * u.y])
        })
        .collect()
}

/// Renders labelled outlines on a common square canvas centered at the
/// origin.
pub fn render(layers: &[(&str, Vec<[f64; 2]>)]) -> String {
    let extent = layers
        .iter()
        .flat_map(|(_, pts)| pts.iter())
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(1e-12, f64::max)
        * 1.1;
    let scale = 0.5 * SIZE / extent;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let c = 0.5 * SIZE;
    let _ = writeln!(
        out,
        r##"<path d="M0 {c}H{SIZE}M{c} 0V{SIZE}" stroke="#bbbbbb" stroke-width="0.5"/>"##
    );
    for (i, (label, pts)) in layers.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let d: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.4},{:.4}", c + scale * p[0], c - scale * p[1]))
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="none" stroke="{color}" stroke-width="1.5"><title>{label}</title></polygon>"#,
            d.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="8" y="{}" font-family="monospace" font-size="12" fill="{color}">{label}</text>"#,
            18 + 16 * i
        );
    }
    out.push_str("</svg>\n");
    out
}
