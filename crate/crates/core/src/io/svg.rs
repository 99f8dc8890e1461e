//! SVG overlay of a detected shape on its mask outline.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::imaging::{extract_boundary, BinaryMask};
use crate::types::OrderedShape2D;

/// Renders the mask outline as light pixel runs, the shape as red points
/// joined in order (closed for contours). Output depends only on the inputs.
pub fn render_svg(mask: &BinaryMask, shape: &OrderedShape2D) -> Result<String> {
    let (w, h) = (mask.width(), mask.height());
    for p in shape.points() {
        if !(p.u >= 0.0 && p.v >= 0.0 && p.u < w as f64 && p.v < h as f64) {
            return Err(Error::OutOfBounds { u: p.u, v: p.v, width: w, height: h });
        }
    }
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(s, r#"<rect width="{w}" height="{h}" fill="black"/>"#).unwrap();

    let mut d = String::new();
    if mask.count() > 0 {
        let outline = extract_boundary(mask)?;
        for v in 0..h {
            let mut u = 0;
            while u < w {
                if !outline.get(u, v) {
                    u += 1;
                    continue;
                }
                let start = u;
                while u < w && outline.get(u, v) {
                    u += 1;
                }
                write!(d, "M{:.1} {:.1}h{}v1h-{}z", start as f64 - 0.5, v as f64 - 0.5, u - start, u - start).unwrap();
            }
        }
    }
    writeln!(s, r##"<path d="{d}" fill="#d8d8d8" stroke="none"/>"##).unwrap();

    let pts: Vec<String> = shape.points().iter().map(|p| format!("{:.3},{:.3}", p.u, p.v)).collect();
    let tag = if shape.is_closed() { "polygon" } else { "polyline" };
    writeln!(s, r#"<{tag} points="{}" fill="none" stroke="red" stroke-width="1"/>"#, pts.join(" ")).unwrap();
    for p in shape.points() {
        writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="red"/>"#, p.u, p.v).unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_svg_plot(mask: &BinaryMask, shape: &OrderedShape2D, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let svg = render_svg(mask, shape)?;
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering;
    use crate::types::{Centroids, Pixel2, ShapeConfig};

    fn square() -> BinaryMask {
        let mut m = BinaryMask::new(20, 20).unwrap();
        for v in 5..15 {
            for u in 5..15 {
                m.set(u, v, true);
            }
        }
        m
    }

    #[test]
    fn contour_plot_is_closed_and_stable() {
        let pts = vec![Pixel2::new(5.0, 5.0), Pixel2::new(14.0, 5.0), Pixel2::new(14.0, 14.0), Pixel2::new(5.0, 14.0)];
        let shape = ordering::sort(&Centroids::new(pts, ShapeConfig::Contour(4)).unwrap()).unwrap();
        let a = render_svg(&square(), &shape).unwrap();
        assert_eq!(a, render_svg(&square(), &shape).unwrap());
        assert!(a.contains("<polygon"));
        assert_eq!(a.matches("<circle").count(), 4);
        assert!(a.contains("M4.5 4.5h10v1h-10z"));
    }

    #[test]
    fn points_outside_the_frame_are_rejected() {
        let pts = vec![Pixel2::new(1.0, 1.0), Pixel2::new(25.0, 1.0)];
        let shape = ordering::sort(&Centroids::new(pts, ShapeConfig::Centerline(2)).unwrap()).unwrap();
        assert!(matches!(render_svg(&square(), &shape), Err(Error::OutOfBounds { .. })));
    }
}
