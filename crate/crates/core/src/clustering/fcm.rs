//! Fuzzy C-Means (Bezdek alternation).
//!
//! Alternates the two closed-form minimisers of
//! `J_m = Σ_i Σ_k u_ik^m ‖x_i − c_k‖²`:
//! centres `c_k = Σ u_ik^m x_i / Σ u_ik^m`, then memberships
//! `u_ik ∝ (1/d_ik²)^(1/(m−1))` normalised over k. A point sitting exactly on
//! a centre gets full membership in (the first) such centre.

use rand::Rng as _;

use super::check_counts;
use crate::error::Result;
use crate::rng;
use crate::types::{ClusterParams, Pixel2};

#[derive(Debug, Clone, PartialEq)]
pub struct FcmFit {
    pub centers: Vec<Pixel2>,
    /// Row-major `M × n` membership matrix.
    pub memberships: Vec<f64>,
    /// `J_m` after each full iteration.
    pub objective: Vec<f64>,
    pub iterations: usize,
}

pub fn run(points: &[Pixel2], n: usize, params: &ClusterParams) -> Result<FcmFit> {
    params.validate()?;
    check_counts(points, n)?;
    let m = params.fuzzifier;
    let mut rng = rng::seeded(params.seed);

    let mut u: Vec<f64> = Vec::with_capacity(points.len() * n);
    for _ in points {
        let row: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        let sum: f64 = row.iter().sum();
        u.extend(row.into_iter().map(|x| x / sum));
    }

    let pow_m = |x: f64| if m == 2.0 { x * x } else { x.powf(m) };
    let weight_exp = -1.0 / (m - 1.0);
    let mut centers = vec![Pixel2::default(); n];
    let mut objective = Vec::new();
    let mut weights = vec![0.0; n];
    let mut iterations = 0;

    while iterations < params.max_iters {
        iterations += 1;
        update_centers(points, &u, n, &pow_m, &mut centers);

        let mut max_change: f64 = 0.0;
        let mut j = 0.0;
        for (i, p) in points.iter().enumerate() {
            let row = &mut u[i * n..(i + 1) * n];
            let coincident = centers.iter().position(|c| p.dist2(c) == 0.0);
            if let Some(hit) = coincident {
                for (k, uk) in row.iter_mut().enumerate() {
                    let new = if k == hit { 1.0 } else { 0.0 };
                    max_change = max_change.max((new - *uk).abs());
                    *uk = new;
                }
                continue;
            }
            let mut total = 0.0;
            for (w, c) in weights.iter_mut().zip(&centers) {
                let d2 = p.dist2(c);
                *w = if m == 2.0 { 1.0 / d2 } else { d2.powf(weight_exp) };
                total += *w;
            }
            for (k, uk) in row.iter_mut().enumerate() {
                let new = weights[k] / total;
                max_change = max_change.max((new - *uk).abs());
                *uk = new;
                j += pow_m(new) * p.dist2(&centers[k]);
            }
        }
        objective.push(j);
        if max_change < params.tol {
            break;
        }
    }
    // centres consistent with the final memberships
    update_centers(points, &u, n, &pow_m, &mut centers);
    Ok(FcmFit { centers, memberships: u, objective, iterations })
}

fn update_centers(
    points: &[Pixel2],
    u: &[f64],
    n: usize,
    pow_m: &impl Fn(f64) -> f64,
    centers: &mut [Pixel2],
) {
    let mut acc = vec![(0.0, 0.0, 0.0); n];
    for (i, p) in points.iter().enumerate() {
        for (k, a) in acc.iter_mut().enumerate() {
            let w = pow_m(u[i * n + k]);
            a.0 += w * p.u;
            a.1 += w * p.v;
            a.2 += w;
        }
    }
    for (c, a) in centers.iter_mut().zip(acc) {
        if a.2 > 0.0 {
            *c = Pixel2::new(a.0 / a.2, a.1 / a.2);
        }
    }
}

/// `J_m` for explicit memberships and centres.
pub fn objective(points: &[Pixel2], memberships: &[f64], centers: &[Pixel2], m: f64) -> f64 {
    let n = centers.len();
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            centers
                .iter()
                .enumerate()
                .map(|(k, c)| memberships[i * n + k].powf(m) * p.dist2(c))
                .sum::<f64>()
        })
        .sum()
}
