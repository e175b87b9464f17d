//! SVG pictures of rank-2 fans.

use std::fmt::Write;

use crate::error::{Result, ToricError};
use crate::fan::Fan;
use crate::lattice::LatticeVector;

const PALETTE: [&str; 8] = [
    "#8dd3c7", "#fdb462", "#bebada", "#fb8072", "#80b1d3", "#b3de69", "#fccde5", "#d9d9d9",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderOptions {
    pub size: u32,
    pub margin: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { size: 512, margin: 32 }
    }
}

fn point(v: &LatticeVector, center: f64, radius: f64) -> (f64, f64) {
    let (x, y) = (v.coords()[0] as f64, v.coords()[1] as f64);
    let len = (x * x + y * y).sqrt();
    (center + radius * x / len, center - radius * y / len)
}

/// Rays as segments out to a circle, 2-cones as shaded sectors coloured by
/// their position in the fan, and a marker at the origin.
pub fn render_svg(fan: &Fan, options: RenderOptions) -> Result<String> {
    if fan.rank() != 2 {
        return Err(ToricError::domain(format!("can only draw rank-2 fans, got rank {}", fan.rank())));
    }
    let size = options.size as f64;
    let center = size / 2.0;
    let radius = center - options.margin as f64;
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        options.size
    );
    let _ = writeln!(svg, r#"<rect width="{0}" height="{0}" fill="white"/>"#, options.size);

    let sectors = fan.cones().iter().filter(|c| c.cone.dim() == 2);
    for (k, c) in sectors.enumerate() {
        let (mut a, mut b) = (&c.cone.rays()[0], &c.cone.rays()[1]);
        let cross = a.coords()[0] * b.coords()[1] - a.coords()[1] * b.coords()[0];
        if cross < 0 {
            std::mem::swap(&mut a, &mut b);
        }
        let (ax, ay) = point(a, center, radius);
        let (bx, by) = point(b, center, radius);
        let _ = writeln!(
            svg,
            r#"<path class="sector" data-cone="{id}" d="M {center:.2} {center:.2} L {ax:.2} {ay:.2} A {radius:.2} {radius:.2} 0 0 0 {bx:.2} {by:.2} Z" fill="{fill}" fill-opacity="0.6" stroke="none"/>"#,
            id = c.id,
            fill = PALETTE[k % PALETTE.len()],
        );
    }
    for ray in fan.rays() {
        let (x, y) = point(&ray, center, radius);
        let _ = writeln!(
            svg,
            r#"<line class="ray" data-ray="{ray}" x1="{center:.2}" y1="{center:.2}" x2="{x:.2}" y2="{y:.2}" stroke="black" stroke-width="2"/>"#
        );
    }
    let _ = writeln!(svg, r#"<circle class="origin" cx="{center:.2}" cy="{center:.2}" r="4" fill="black"/>"#);
    svg.push_str("</svg>\n");
    Ok(svg)
}
