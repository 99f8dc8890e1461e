//! Puts centroids into the canonical order of their configuration:
//! an endpoint-first chain for centerlines, a clockwise cycle starting at
//! the topmost point for contours, and row-major order for surfaces.
//!
//! When centroids carry SOM lattice order that order is kept (only
//! reversed, rotated or flipped into canonical orientation). Otherwise a
//! geometric fallback is used. The contour fallback sorts by angle around
//! the mean, which is only correct for star-shaped point sets.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{all_collinear, mean, principal_axes, signed_area};
use crate::types::{Centroids, OrderedShape2D, Pixel2, ShapeConfig, SomTopology};

/// Smaller `v` first, then smaller `u`.
fn top_left(a: &Pixel2, b: &Pixel2) -> Ordering {
    a.v.total_cmp(&b.v).then(a.u.total_cmp(&b.u))
}

fn mismatch(expected: &'static str, c: &Centroids) -> Error {
    Error::ConfigMismatch { expected, found: c.config().to_string() }
}

pub fn sort_centerline(c: &Centroids) -> Result<OrderedShape2D> {
    if !matches!(c.config(), ShapeConfig::Centerline(_)) {
        return Err(mismatch("centerline", c));
    }
    let pts = c.points();
    if let Some(lattice @ SomTopology::Chain(_)) = c.lattice() {
        let mut out = pts.to_vec();
        if top_left(&out[out.len() - 1], &out[0]) == Ordering::Less {
            out.reverse();
        }
        return Ok(OrderedShape2D::from_parts(out, c.config(), Some(lattice)));
    }
    Ok(OrderedShape2D::from_parts(nearest_neighbour_chain(pts), c.config(), None))
}

/// Starts at the principal-axis extreme that is top-left-most, then
/// repeatedly hops to the nearest unvisited point (lower index on ties).
fn nearest_neighbour_chain(pts: &[Pixel2]) -> Vec<Pixel2> {
    let pa = principal_axes(pts);
    let proj: Vec<f64> = pts.iter().map(|p| pa.project_major(p)).collect();
    let argmin = (0..pts.len()).min_by(|&a, &b| proj[a].total_cmp(&proj[b]).then(a.cmp(&b))).unwrap();
    let argmax = (0..pts.len()).max_by(|&a, &b| proj[a].total_cmp(&proj[b]).then(b.cmp(&a))).unwrap();
    let start = if top_left(&pts[argmax], &pts[argmin]) == Ordering::Less { argmax } else { argmin };

    let mut visited = vec![false; pts.len()];
    let mut out = Vec::with_capacity(pts.len());
    let mut cur = start;
    visited[cur] = true;
    out.push(pts[cur]);
    for _ in 1..pts.len() {
        let mut next = (usize::MAX, f64::INFINITY);
        for (j, p) in pts.iter().enumerate() {
            if !visited[j] {
                let d = p.dist2(&pts[cur]);
                if d < next.1 {
                    next = (j, d);
                }
            }
        }
        cur = next.0;
        visited[cur] = true;
        out.push(pts[cur]);
    }
    out
}

pub fn sort_contour(c: &Centroids) -> Result<OrderedShape2D> {
    if !matches!(c.config(), ShapeConfig::Contour(_)) {
        return Err(mismatch("contour", c));
    }
    let pts = c.points();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints { required: 3, found: pts.len() });
    }
    if all_collinear(pts) {
        return Err(Error::DegenerateContour);
    }
    let lattice = c.lattice().filter(|l| matches!(l, SomTopology::Ring(_)));
    let mut cycle = match lattice {
        Some(_) => pts.to_vec(),
        None => {
            let centre = mean(pts);
            let mut keyed: Vec<(f64, f64, usize)> = pts
                .iter()
                .enumerate()
                .map(|(i, p)| ((p.v - centre.v).atan2(p.u - centre.u), p.dist2(&centre), i))
                .collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
            keyed.into_iter().map(|(_, _, i)| pts[i]).collect()
        }
    };
    if signed_area(&cycle) < 0.0 {
        cycle.reverse();
    }
    let start = (0..cycle.len()).min_by(|&a, &b| top_left(&cycle[a], &cycle[b]).then(a.cmp(&b))).unwrap();
    cycle.rotate_left(start);
    Ok(OrderedShape2D::from_parts(cycle, c.config(), lattice))
}

pub fn sort_surface(c: &Centroids) -> Result<OrderedShape2D> {
    let ShapeConfig::Surface { rows, cols } = c.config() else {
        return Err(mismatch("surface", c));
    };
    let pts = c.points();
    if pts.len() != rows * cols {
        return Err(Error::CountMismatch { rows, cols, found: pts.len() });
    }
    if let Some(lattice @ SomTopology::Grid { rows: lr, cols: lc }) = c.lattice() {
        if (lr, lc) == (rows, cols) {
            return Ok(OrderedShape2D::from_parts(orient_grid(pts, rows, cols), c.config(), Some(lattice)));
        }
    }
    let mut sorted = pts.to_vec();
    sorted.sort_by(top_left);
    for row in sorted.chunks_mut(cols) {
        row.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.v.total_cmp(&b.v)));
    }
    Ok(OrderedShape2D::from_parts(sorted, c.config(), None))
}

/// Flips (and, for square grids, transposes) a lattice so that row index
/// grows with `v` and column index with `u`.
fn orient_grid(pts: &[Pixel2], rows: usize, cols: usize) -> Vec<Pixel2> {
    let at = |g: &[Pixel2], r: usize, c: usize, cols: usize| g[r * cols + c];
    let mut grid = pts.to_vec();
    let row_mean = |g: &[Pixel2], r: usize| (0..cols).map(|c| g[r * cols + c]).fold((0.0, 0.0), |s, p| (s.0 + p.u, s.1 + p.v));
    let col_mean = |g: &[Pixel2], c: usize| (0..rows).map(|r| g[r * cols + c]).fold((0.0, 0.0), |s, p| (s.0 + p.u, s.1 + p.v));

    if rows == cols {
        // transpose when columns, not rows, advance along v
        let dv_rows = (row_mean(&grid, rows - 1).1 - row_mean(&grid, 0).1).abs();
        let dv_cols = (col_mean(&grid, cols - 1).1 - col_mean(&grid, 0).1).abs();
        if dv_cols > dv_rows {
            grid = (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| at(pts, c, r, cols)).collect();
        }
    }
    if row_mean(&grid, rows - 1).1 < row_mean(&grid, 0).1 {
        grid = (0..rows).rev().flat_map(|r| grid[r * cols..(r + 1) * cols].to_vec()).collect();
    }
    if col_mean(&grid, cols - 1).0 < col_mean(&grid, 0).0 {
        for row in grid.chunks_mut(cols) {
            row.reverse();
        }
    }
    grid
}

/// Dispatches on the centroids' configuration.
pub fn sort(c: &Centroids) -> Result<OrderedShape2D> {
    match c.config() {
        ShapeConfig::Centerline(_) => sort_centerline(c),
        ShapeConfig::Contour(_) => sort_contour(c),
        ShapeConfig::Surface { .. } => sort_surface(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(raw: &[(f64, f64)]) -> Vec<Pixel2> {
        raw.iter().map(|&p| p.into()).collect()
    }

    fn uv(shape: &OrderedShape2D) -> Vec<(f64, f64)> {
        shape.points().iter().map(|p| (p.u, p.v)).collect()
    }

    #[test]
    fn collinear_centerline() {
        let c = Centroids::new(pts(&[(30.0, 5.0), (10.0, 5.0), (20.0, 5.0)]), ShapeConfig::Centerline(3)).unwrap();
        let s = sort_centerline(&c).unwrap();
        assert_eq!(uv(&s), vec![(10.0, 5.0), (20.0, 5.0), (30.0, 5.0)]);
        assert_eq!(sort_centerline(&s.clone().into_centroids()).unwrap(), s);
    }

    #[test]
    fn l_shape_chain() {
        let c = Centroids::new(
            pts(&[(10.0, 20.0), (0.0, 20.0), (20.0, 20.0), (0.0, 0.0), (0.0, 10.0)]),
            ShapeConfig::Centerline(5),
        )
        .unwrap();
        let s = sort_centerline(&c).unwrap();
        assert_eq!(uv(&s), vec![(0.0, 0.0), (0.0, 10.0), (0.0, 20.0), (10.0, 20.0), (20.0, 20.0)]);
    }

    #[test]
    fn chain_lattice_is_kept_and_oriented() {
        let raw = pts(&[(50.0, 40.0), (20.0, 30.0), (0.0, 0.0)]);
        let c = Centroids::new(raw, ShapeConfig::Centerline(3)).unwrap().with_lattice(SomTopology::Chain(3)).unwrap();
        assert_eq!(uv(&sort_centerline(&c).unwrap()), vec![(0.0, 0.0), (20.0, 30.0), (50.0, 40.0)]);
    }

    #[test]
    fn square_contour_clockwise_from_top_left() {
        let c = Centroids::new(pts(&[(10.0, 10.0), (0.0, 10.0), (10.0, 0.0), (0.0, 0.0)]), ShapeConfig::Contour(4)).unwrap();
        let s = sort_contour(&c).unwrap();
        assert_eq!(uv(&s), vec![(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]);
    }

    #[test]
    fn ring_lattice_is_reflected_to_clockwise() {
        // counter-clockwise on screen
        let raw = pts(&[(10.0, 0.0), (0.0, 0.0), (0.0, 10.0), (10.0, 10.0)]);
        let c = Centroids::new(raw, ShapeConfig::Contour(4)).unwrap().with_lattice(SomTopology::Ring(4)).unwrap();
        let s = sort_contour(&c).unwrap();
        assert_eq!(uv(&s), vec![(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]);
    }

    #[test]
    fn collinear_contour_is_rejected() {
        let c = Centroids::new(pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]), ShapeConfig::Contour(3)).unwrap();
        assert!(matches!(sort_contour(&c), Err(Error::DegenerateContour)));
    }

    #[test]
    fn octagon_any_permutation_same_cycle() {
        let ring: Vec<Pixel2> = (0..8)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 8.0 + 0.1;
                Pixel2::new(100.0 + 40.0 * t.cos(), 80.0 + 40.0 * t.sin())
            })
            .collect();
        let reference = sort_contour(&Centroids::new(ring.clone(), ShapeConfig::Contour(8)).unwrap()).unwrap();
        let mut perm = ring;
        for k in 0..8 {
            perm.rotate_left(3);
            perm.swap(k % 8, (k * 5 + 1) % 8);
            let s = sort_contour(&Centroids::new(perm.clone(), ShapeConfig::Contour(8)).unwrap()).unwrap();
            assert_eq!(s, reference);
        }
    }

    #[test]
    fn small_surface_row_major() {
        let c = Centroids::new(pts(&[(10.0, 10.0), (0.0, 10.0), (10.0, 0.0), (0.0, 0.0)]), ShapeConfig::surface(2, 2)).unwrap();
        assert_eq!(uv(&sort_surface(&c).unwrap()), vec![(0.0, 0.0), (10.0, 0.0), (0.0, 10.0), (10.0, 10.0)]);
    }

    #[test]
    fn grid_lattice_is_flipped_into_row_major() {
        // lattice listed bottom-right first
        let raw = pts(&[(10.0, 10.0), (0.0, 10.0), (10.0, 0.0), (0.0, 0.0)]);
        let c = Centroids::new(raw, ShapeConfig::surface(2, 2))
            .unwrap()
            .with_lattice(SomTopology::Grid { rows: 2, cols: 2 })
            .unwrap();
        assert_eq!(uv(&sort_surface(&c).unwrap()), vec![(0.0, 0.0), (10.0, 0.0), (0.0, 10.0), (10.0, 10.0)]);
        // transposed lattice: columns run down the image
        let raw = pts(&[(0.0, 0.0), (0.0, 10.0), (10.0, 0.0), (10.0, 10.0)]);
        let c = Centroids::new(raw, ShapeConfig::surface(2, 2))
            .unwrap()
            .with_lattice(SomTopology::Grid { rows: 2, cols: 2 })
            .unwrap();
        assert_eq!(uv(&sort_surface(&c).unwrap()), vec![(0.0, 0.0), (10.0, 0.0), (0.0, 10.0), (10.0, 10.0)]);
    }

    #[test]
    fn config_mismatch_errors() {
        let c = Centroids::new(pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]), ShapeConfig::Contour(4)).unwrap();
        assert!(matches!(sort_centerline(&c), Err(Error::ConfigMismatch { .. })));
        assert!(matches!(sort_surface(&c), Err(Error::ConfigMismatch { .. })));
        let c = Centroids::new(c.points().to_vec(), ShapeConfig::Centerline(4)).unwrap();
        assert!(matches!(sort_contour(&c), Err(Error::ConfigMismatch { .. })));
    }

    fn grid_points(rows: usize, cols: usize, spacing: f64) -> Vec<Pixel2> {
        (0..rows)
            .flat_map(|r| (0..cols).map(move |c| Pixel2::new(20.0 + c as f64 * spacing, 30.0 + r as f64 * spacing)))
            .collect()
    }

    proptest! {
        #[test]
        fn regular_grid_shuffled_is_row_major(seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let truth = grid_points(4, 8, 12.0);
            let mut shuffled = truth.clone();
            shuffled.shuffle(&mut crate::rng::seeded(seed));
            let s = sort_surface(&Centroids::new(shuffled, ShapeConfig::surface(4, 8)).unwrap()).unwrap();
            prop_assert_eq!(s.points(), &truth[..]);
        }

        #[test]
        fn jittered_grid_recovers_generator_order(seed in any::<u64>()) {
            use rand::{seq::SliceRandom, Rng};
            let mut rng = crate::rng::seeded(seed);
            let spacing = 10.0;
            let truth: Vec<Pixel2> = grid_points(4, 8, spacing)
                .into_iter()
                .map(|p| Pixel2::new(p.u + rng.gen_range(-0.24..0.24) * spacing, p.v + rng.gen_range(-0.24..0.24) * spacing))
                .collect();
            let mut shuffled = truth.clone();
            shuffled.shuffle(&mut rng);
            let s = sort_surface(&Centroids::new(shuffled, ShapeConfig::surface(4, 8)).unwrap()).unwrap();
            prop_assert_eq!(s.points(), &truth[..]);
        }
    }
}
