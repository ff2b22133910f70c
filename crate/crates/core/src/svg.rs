//! SVG drawing of planar realizations.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geometry::Realization;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// One labeled circle per ball. Only dimension 2 is supported.
pub fn render_svg(r: &Realization) -> Result<String> {
    if r.dim != 2 {
        return Err(Error::UnsupportedDimension(r.dim));
    }
    let (lo, hi) = if r.balls.is_empty() { (vec![-1.0, -1.0], vec![1.0, 1.0]) } else { r.bounding_box() };
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let k = (SIZE - 2.0 * MARGIN) / span;
    let x = |v: f64| MARGIN + (v - lo[0]) * k;
    // SVG's y axis points down.
    let y = |v: f64| SIZE - MARGIN - (v - lo[1]) * k;
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (i, b) in r.balls.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let (cx, cy, rr) = (x(b.center[0]), y(b.center[1]), b.radius * k);
        writeln!(
            out,
            r#"  <circle id="U{}" cx="{cx:.4}" cy="{cy:.4}" r="{rr:.4}" fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="1.5"/>"#,
            i + 1
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="{:.4}" y="{:.4}" font-family="sans-serif" font-size="14" fill="{color}" text-anchor="middle">{}</text>"#,
            cx,
            cy - rr - 4.0,
            i + 1
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
