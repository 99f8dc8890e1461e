//! Pinhole back-projection of an ordered 2D shape through a depth map.
//!
//! Camera frame: x right, y down, z forward, millimetres. No lens
//! distortion is modelled.

use crate::error::{Error, Result};
use crate::types::{OrderedShape2D, Pixel2, Point3, Shape3D};

/// Default hole-filling search radius in pixels.
pub const DEFAULT_SEARCH_RADIUS: f64 = 3.0;

/// 16-bit depth raster in millimetres; 0 marks a missing measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthFrame {
    width: usize,
    height: usize,
    depth: Vec<u16>,
}

impl DepthFrame {
    pub fn new(width: usize, height: usize, depth: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParams(format!("depth frame must be non-empty, got {width}x{height}")));
        }
        if depth.len() != width * height {
            return Err(Error::InvalidParams(format!(
                "{width}x{height} depth frame needs {} samples, got {}",
                width * height,
                depth.len()
            )));
        }
        Ok(Self { width, height, depth })
    }

    pub fn filled(width: usize, height: usize, mm: u16) -> Result<Self> {
        Self::new(width, height, vec![mm; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u16] {
        &self.depth
    }

    pub fn get(&self, u: usize, v: usize) -> u16 {
        self.depth[v * self.width + u]
    }

    pub fn set(&mut self, u: usize, v: usize, mm: u16) {
        self.depth[v * self.width + u] = mm;
    }

    /// Depth at `(u, v)`, or the nearest valid depth within `radius`
    /// (Euclidean; ties go to raster order).
    pub fn depth_near(&self, u: usize, v: usize, radius: f64) -> Result<u16> {
        let d = self.get(u, v);
        if d != 0 {
            return Ok(d);
        }
        let r = radius.max(0.0).floor() as usize;
        let mut best: Option<(usize, usize, u16)> = None; // (dist², raster index, depth)
        for vv in v.saturating_sub(r)..=(v + r).min(self.height - 1) {
            for uu in u.saturating_sub(r)..=(u + r).min(self.width - 1) {
                let d = self.get(uu, vv);
                if d == 0 {
                    continue;
                }
                let d2 = uu.abs_diff(u).pow(2) + vv.abs_diff(v).pow(2);
                if d2 as f64 > radius * radius {
                    continue;
                }
                let key = (d2, vv * self.width + uu);
                if best.is_none_or(|b| key < (b.0, b.1)) {
                    best = Some((key.0, key.1, d));
                }
            }
        }
        best.map(|b| b.2).ok_or(Error::UnrecoverableHole { u, v, radius })
    }
}

/// Pinhole intrinsics in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl Intrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64) -> Result<Self> {
        if !(fx > 0.0 && fy > 0.0) || !cx.is_finite() || !cy.is_finite() {
            return Err(Error::InvalidParams(format!("invalid intrinsics fx={fx} fy={fy} cx={cx} cy={cy}")));
        }
        Ok(Self { fx, fy, cx, cy })
    }

    /// Forward projection of a camera-frame point to pixel coordinates.
    pub fn project(&self, p: &Point3) -> Pixel2 {
        Pixel2::new(self.fx * p.x / p.z + self.cx, self.fy * p.y / p.z + self.cy)
    }
}

pub fn backproject(p: Pixel2, depth_mm: f64, k: &Intrinsics) -> Result<Point3> {
    if !(depth_mm > 0.0) {
        return Err(Error::InvalidDepth);
    }
    let z = depth_mm;
    Ok(Point3 { x: (p.u - k.cx) * z / k.fx, y: (p.v - k.cy) * z / k.fy, z })
}

/// Lifts every shape point, preserving order. Depth is read at the rounded
/// pixel, falling back to the nearest valid depth within `search_radius`.
pub fn lift_shape(shape: &OrderedShape2D, depth: &DepthFrame, k: &Intrinsics, search_radius: f64) -> Result<Shape3D> {
    let points = shape
        .points()
        .iter()
        .map(|p| {
            let (u, v) = (p.u.round(), p.v.round());
            if !(u >= 0.0 && v >= 0.0 && u < depth.width as f64 && v < depth.height as f64) {
                return Err(Error::OutOfBounds { u: p.u, v: p.v, width: depth.width, height: depth.height });
            }
            let mm = depth.depth_near(u as usize, v as usize, search_radius)?;
            backproject(*p, mm as f64, k)
        })
        .collect::<Result<Vec<_>>>()?;
    Shape3D::new(points, shape.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering;
    use crate::types::{Centroids, ShapeConfig};
    use proptest::prelude::*;

    fn k() -> Intrinsics {
        Intrinsics::new(500.0, 500.0, 320.0, 240.0).unwrap()
    }

    fn shape(raw: &[(f64, f64)]) -> OrderedShape2D {
        let pts = raw.iter().map(|&p| p.into()).collect();
        ordering::sort(&Centroids::new(pts, ShapeConfig::Centerline(raw.len())).unwrap()).unwrap()
    }

    #[test]
    fn backprojection_examples() {
        assert_eq!(backproject(Pixel2::new(320.0, 240.0), 800.0, &k()).unwrap(), Point3 { x: 0.0, y: 0.0, z: 800.0 });
        assert_eq!(
            backproject(Pixel2::new(420.0, 240.0), 1000.0, &k()).unwrap(),
            Point3 { x: 200.0, y: 0.0, z: 1000.0 }
        );
        assert!(matches!(backproject(Pixel2::new(1.0, 1.0), 0.0, &k()), Err(Error::InvalidDepth)));
    }

    #[test]
    fn constant_depth_plane() {
        let frame = DepthFrame::filled(640, 480, 500).unwrap();
        let s = shape(&[(100.0, 100.0), (200.0, 120.0), (300.0, 140.0)]);
        let lifted = lift_shape(&s, &frame, &k(), 3.0).unwrap();
        assert_eq!(lifted.len(), 3);
        for (p3, p2) in lifted.points().iter().zip(s.points()) {
            assert_eq!(p3.z, 500.0);
            assert_eq!(*p3, backproject(*p2, 500.0, &k()).unwrap());
        }
    }

    #[test]
    fn hole_uses_nearest_neighbour() {
        let mut frame = DepthFrame::filled(50, 50, 700).unwrap();
        frame.set(10, 10, 0);
        frame.set(11, 10, 650);
        let s = shape(&[(10.0, 10.0), (30.0, 30.0), (40.0, 40.0)]);
        let lifted = lift_shape(&s, &frame, &k(), 3.0).unwrap();
        assert_eq!(lifted.points()[0].z, 700.0); // (10, 9) precedes (11, 10) in raster order
        frame.set(10, 9, 0);
        frame.set(9, 10, 0);
        frame.set(10, 11, 0);
        let lifted = lift_shape(&s, &frame, &k(), 3.0).unwrap();
        assert_eq!(lifted.points()[0].z, 650.0);
    }

    #[test]
    fn wide_hole_is_unrecoverable() {
        let mut frame = DepthFrame::filled(60, 60, 700).unwrap();
        for v in 0..60usize {
            for u in 0..60usize {
                if (u.abs_diff(30).pow(2) + v.abs_diff(30).pow(2)) <= 100 {
                    frame.set(u, v, 0);
                }
            }
        }
        let s = shape(&[(30.0, 30.0), (50.0, 50.0), (55.0, 55.0)]);
        assert!(matches!(lift_shape(&s, &frame, &k(), 3.0), Err(Error::UnrecoverableHole { .. })));
        let outside = shape(&[(70.0, 30.0), (50.0, 50.0), (55.0, 55.0)]);
        assert!(matches!(lift_shape(&outside, &frame, &k(), 3.0), Err(Error::OutOfBounds { .. })));
    }

    proptest! {
        #[test]
        fn projection_round_trip(u in 0.0f64..1280.0, v in 0.0f64..720.0, d in 1.0f64..65535.0) {
            let kk = Intrinsics::new(631.4, 631.1, 640.2, 362.8).unwrap();
            let back = kk.project(&backproject(Pixel2::new(u, v), d, &kk).unwrap());
            prop_assert!((back.u - u).abs() < 1e-6 && (back.v - v).abs() < 1e-6);
        }
    }
}
