//! Small planar geometry helpers.

use crate::types::Pixel2;

pub fn mean(points: &[Pixel2]) -> Pixel2 {
    let n = points.len() as f64;
    let (su, sv) = points.iter().fold((0.0, 0.0), |(su, sv), p| (su + p.u, sv + p.v));
    Pixel2::new(su / n, sv / n)
}

/// Principal axes of a 2D point cloud.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Principal {
    pub mean: Pixel2,
    /// Unit vector along the direction of largest variance.
    pub major: (f64, f64),
    /// Unit vector perpendicular to `major`.
    pub minor: (f64, f64),
    pub major_var: f64,
    pub minor_var: f64,
}

impl Principal {
    pub fn project_major(&self, p: &Pixel2) -> f64 {
        (p.u - self.mean.u) * self.major.0 + (p.v - self.mean.v) * self.major.1
    }

    pub fn project_minor(&self, p: &Pixel2) -> f64 {
        (p.u - self.mean.u) * self.minor.0 + (p.v - self.mean.v) * self.minor.1
    }

    pub fn at(&self, major: f64, minor: f64) -> Pixel2 {
        Pixel2::new(
            self.mean.u + major * self.major.0 + minor * self.minor.0,
            self.mean.v + major * self.major.1 + minor * self.minor.1,
        )
    }
}

/// Closed-form eigen decomposition of the 2x2 covariance matrix.
pub fn principal_axes(points: &[Pixel2]) -> Principal {
    let m = mean(points);
    let n = points.len() as f64;
    let (mut suu, mut suv, mut svv) = (0.0, 0.0, 0.0);
    for p in points {
        let du = p.u - m.u;
        let dv = p.v - m.v;
        suu += du * du;
        suv += du * dv;
        svv += dv * dv;
    }
    let (cuu, cuv, cvv) = (suu / n, suv / n, svv / n);
    let half_trace = 0.5 * (cuu + cvv);
    let disc = (0.25 * (cuu - cvv) * (cuu - cvv) + cuv * cuv).sqrt();
    let l1 = half_trace + disc;
    let l2 = (half_trace - disc).max(0.0);
    let major = if cuv.abs() > 1e-12 * (cuu + cvv).max(1e-300) {
        let (x, y) = (l1 - cvv, cuv);
        let norm = x.hypot(y);
        (x / norm, y / norm)
    } else if cuu >= cvv {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    Principal { mean: m, major, minor: (-major.1, major.0), major_var: l1, minor_var: l2 }
}

fn cross(o: &Pixel2, a: &Pixel2, b: &Pixel2) -> f64 {
    (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u)
}

/// Convex hull by Andrew's monotone chain; collinear points are dropped.
/// Returns the hull in counter-clockwise order of the (u, v) axes.
pub fn convex_hull(points: &[Pixel2]) -> Vec<Pixel2> {
    let mut pts: Vec<Pixel2> = points.to_vec();
    pts.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.v.total_cmp(&b.v)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Pixel2> = Vec::with_capacity(2 * pts.len());
    for p in &pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    // upper hull; never pops into the lower one
    let lower = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    hull
}

fn closest_on_segment(p: &Pixel2, a: &Pixel2, b: &Pixel2) -> Pixel2 {
    let (du, dv) = (b.u - a.u, b.v - a.v);
    let len2 = du * du + dv * dv;
    if len2 == 0.0 {
        return *a;
    }
    let t = (((p.u - a.u) * du + (p.v - a.v) * dv) / len2).clamp(0.0, 1.0);
    Pixel2::new(a.u + t * du, a.v + t * dv)
}

fn dist_to_segment(p: &Pixel2, a: &Pixel2, b: &Pixel2) -> f64 {
    p.dist(&closest_on_segment(p, a, b))
}

/// Whether `p` lies inside (or within `eps` of) the convex polygon `hull`
/// as returned by [`convex_hull`]. Degenerate hulls (a point or a segment)
/// are handled by distance.
pub fn hull_contains(hull: &[Pixel2], p: &Pixel2, eps: f64) -> bool {
    match hull.len() {
        0 => false,
        1 => p.dist(&hull[0]) <= eps,
        2 => dist_to_segment(p, &hull[0], &hull[1]) <= eps,
        n => (0..n).all(|i| {
            let a = &hull[i];
            let b = &hull[(i + 1) % n];
            let len = a.dist(b);
            // signed distance to the left of a->b
            cross(a, b, p) / len >= -eps
        }),
    }
}

/// `p` itself when it lies in the convex polygon `hull`, otherwise the
/// closest point on the hull boundary.
pub fn clamp_to_hull(hull: &[Pixel2], p: &Pixel2) -> Pixel2 {
    match hull.len() {
        0 => *p,
        1 => hull[0],
        n => {
            if n > 2 && hull_contains(hull, p, 0.0) {
                return *p;
            }
            let mut best = (f64::INFINITY, *p);
            for i in 0..n {
                let q = closest_on_segment(p, &hull[i], &hull[(i + 1) % n]);
                let d = p.dist2(&q);
                if d < best.0 {
                    best = (d, q);
                }
            }
            best.1
        }
    }
}

/// Shoelace area, positive when the cycle runs clockwise on screen (v down).
pub fn signed_area(points: &[Pixel2]) -> f64 {
    let n = points.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let a = &points[i];
            let b = &points[(i + 1) % n];
            a.u * b.v - b.u * a.v
        })
        .sum();
    twice / 2.0
}

/// True when every point lies on one line (relative tolerance).
pub fn all_collinear(points: &[Pixel2]) -> bool {
    if points.len() < 3 {
        return true;
    }
    let pa = principal_axes(points);
    pa.minor_var <= 1e-12 * pa.major_var.max(f64::MIN_POSITIVE)
}

/// Total length of an open polyline.
pub fn polyline_length(points: &[Pixel2]) -> f64 {
    points.windows(2).map(|w| w[0].dist(&w[1])).sum()
}

/// Distance from `p` to the nearest segment of an open polyline.
pub fn dist_to_polyline(p: &Pixel2, polyline: &[Pixel2]) -> f64 {
    match polyline.len() {
        0 => f64::INFINITY,
        1 => p.dist(&polyline[0]),
        _ => polyline
            .windows(2)
            .map(|w| dist_to_segment(p, &w[0], &w[1]))
            .fold(f64::INFINITY, f64::min),
    }
}
