//! Kohonen self-organising map on a chain, ring or grid lattice.
//!
//! Training is online: every epoch presents all points once in a seeded
//! shuffled order, finds the best-matching unit and pulls each unit towards
//! the sample by `α(t) · exp(−d² / 2σ(t)²)`, where `d` is the lattice
//! distance to the BMU. Both `α` and `σ` decay geometrically from their
//! initial to their final values across the epoch budget.
//!
//! Weights start along the principal axes, clamped into the convex hull of
//! the data (see [`initial_weights`]). Every update is a convex step towards
//! a data point, so the weights never leave the hull.
//!
//! Online updates settle near cell means, which minimise squared error, while
//! the quantization error is a mean distance. The fit therefore returns the
//! epoch-end weights (initial weights included) with the lowest quantization
//! error.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{check_counts, nearest};
use crate::error::Result;
use crate::geometry::{clamp_to_hull, convex_hull, principal_axes, Principal};
use crate::rng::{self, Rng};
use crate::types::{ClusterParams, Pixel2, SomTopology};

/// Neighbourhood weights below this are skipped.
const MIN_INFLUENCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SomFit {
    /// Unit weights in lattice order.
    pub weights: Vec<Pixel2>,
    /// Mean point-to-BMU distance of the initial and of the returned weights.
    pub initial_quantization_error: f64,
    pub final_quantization_error: f64,
    pub epochs: usize,
    /// Epoch whose weights were returned; 0 means the initial weights.
    pub best_epoch: usize,
}

pub fn train(points: &[Pixel2], topology: SomTopology, params: &ClusterParams) -> Result<SomFit> {
    params.validate()?;
    topology.validate()?;
    let n = topology.len();
    check_counts(points, n)?;
    let som = &params.som;
    let mut rng = rng::seeded(params.seed);

    let mut weights = initial_weights(points, topology, som.init_jitter, &mut rng);
    let initial_quantization_error = quantization_error(points, &weights);

    let epochs = params.max_iters;
    let sigma0 = som.radius.unwrap_or(n as f64 / 4.0);
    let schedule = |start: f64, end: f64, t: usize| {
        if epochs <= 1 {
            start
        } else {
            start * (end / start).powf(t as f64 / (epochs - 1) as f64)
        }
    };

    let mut order: Vec<usize> = (0..points.len()).collect();
    let mut ran = 0;
    let mut best = (initial_quantization_error, 0, weights.clone());
    for t in 0..epochs {
        ran += 1;
        let alpha = schedule(som.learning_rate, som.final_learning_rate, t);
        let sigma = schedule(sigma0, som.final_radius, t);
        let neighbours = neighbourhoods(topology, alpha, sigma);

        order.shuffle(&mut rng);
        let before = weights.clone();
        for &i in &order {
            let x = points[i];
            let bmu = nearest(&x, &weights).0;
            for &(unit, rate) in &neighbours[bmu] {
                let w = &mut weights[unit];
                w.u += rate * (x.u - w.u);
                w.v += rate * (x.v - w.v);
            }
        }
        let qe = quantization_error(points, &weights);
        if qe <= best.0 {
            best = (qe, ran, weights.clone());
        }
        let moved = before.iter().zip(&weights).map(|(a, b)| a.dist(b)).fold(0.0, f64::max);
        if moved < params.tol {
            break;
        }
    }

    let (final_quantization_error, best_epoch, weights) = best;
    Ok(SomFit { weights, initial_quantization_error, final_quantization_error, epochs: ran, best_epoch })
}

/// For each unit, the units it drags along and their step sizes `α·h`.
fn neighbourhoods(topology: SomTopology, alpha: f64, sigma: f64) -> Vec<Vec<(usize, f64)>> {
    let n = topology.len();
    let h: Vec<f64> = (0..=topology.diameter())
        .map(|d| (-((d * d) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    (0..n)
        .map(|b| {
            (0..n)
                .filter_map(|j| {
                    let infl = h[topology.lattice_distance(b, j)];
                    (infl >= MIN_INFLUENCE).then_some((j, alpha * infl))
                })
                .collect()
        })
        .collect()
}

pub fn quantization_error(points: &[Pixel2], weights: &[Pixel2]) -> f64 {
    points.iter().map(|p| nearest(p, weights).1.sqrt()).sum::<f64>() / points.len() as f64
}

/// Topology-respecting start:
/// - chain: `N` points on the first principal axis at the `(i + ½)/N`
///   quantiles of the data's projection onto it;
/// - ring: `N` equally spaced angles on the ellipse with semi-axes `√2·σ`
///   along the principal axes;
/// - grid: a `rows × cols` lattice spanning `±√3·σ` of the principal plane,
///   rows along the axis closer to image `v`.
///
/// Positions outside the convex hull of the data are moved to its nearest
/// boundary point. Each weight is then blended with a random data point by
/// `jitter`.
pub fn initial_weights(points: &[Pixel2], topology: SomTopology, jitter: f64, rng: &mut Rng) -> Vec<Pixel2> {
    let pa = principal_axes(points);
    let targets = match topology {
        SomTopology::Chain(n) => {
            let mut proj: Vec<f64> = points.iter().map(|p| pa.project_major(p)).collect();
            proj.sort_by(f64::total_cmp);
            let m = points.len();
            (0..n)
                .map(|i| {
                    let rank = (((i as f64 + 0.5) / n as f64) * m as f64) as usize;
                    pa.at(proj[rank.min(m - 1)], 0.0)
                })
                .collect()
        }
        SomTopology::Ring(n) => {
            let (a, b) = ((2.0 * pa.major_var).sqrt(), (2.0 * pa.minor_var).sqrt());
            (0..n)
                .map(|i| {
                    let theta = std::f64::consts::TAU * i as f64 / n as f64;
                    pa.at(a * theta.cos(), b * theta.sin())
                })
                .collect()
        }
        SomTopology::Grid { rows, cols } => grid_start(&pa, rows, cols),
    };
    let hull = convex_hull(points);
    let mut weights: Vec<Pixel2> = targets.iter().map(|t| clamp_to_hull(&hull, t)).collect();
    if jitter > 0.0 {
        for w in &mut weights {
            let x = points[rng.gen_range(0..points.len())];
            w.u += jitter * (x.u - w.u);
            w.v += jitter * (x.v - w.v);
        }
    }
    weights
}

fn grid_start(pa: &Principal, rows: usize, cols: usize) -> Vec<Pixel2> {
    // rows follow whichever principal axis points more along v
    let major_is_rows = pa.major.1.abs() >= pa.minor.1.abs();
    let (row_axis, row_var, col_axis, col_var) = if major_is_rows {
        (pa.major, pa.major_var, pa.minor, pa.minor_var)
    } else {
        (pa.minor, pa.minor_var, pa.major, pa.major_var)
    };
    // orient so that row index grows with v and column index with u
    let row_axis = if row_axis.1 < 0.0 { (-row_axis.0, -row_axis.1) } else { row_axis };
    let col_axis = if col_axis.0 < 0.0 { (-col_axis.0, -col_axis.1) } else { col_axis };
    let (row_half, col_half) = ((3.0 * row_var).sqrt(), (3.0 * col_var).sqrt());
    let coord = |i: usize, count: usize, half: f64| half * (2.0 * (i as f64 + 0.5) / count as f64 - 1.0);
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let (a, b) = (coord(r, rows, row_half), coord(c, cols, col_half));
            out.push(Pixel2::new(
                pa.mean.u + a * row_axis.0 + b * col_axis.0,
                pa.mean.v + a * row_axis.1 + b * col_axis.1,
            ));
        }
    }
    out
}
