//! Expectation-maximisation for a mixture of axis-aligned (diagonal
//! covariance) Gaussians.
//!
//! Variances are constrained to `σ² ≥ ε`; the M-step maximises the expected
//! log-likelihood over that set, i.e. `σ² = max(weighted variance, ε)`, so
//! the data log-likelihood still never decreases between iterations.

use std::f64::consts::PI;

use super::{check_counts, kmeans};
use crate::error::{Error, Result};
use crate::rng;
use crate::types::{ClusterParams, Pixel2};

/// Lloyd iterations used to initialise the mixture.
const INIT_KMEANS_ITERS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct GmmFit {
    pub means: Vec<Pixel2>,
    /// Per-component `(σ_u², σ_v²)`.
    pub variances: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
    /// Total log-likelihood evaluated before each M-step and once after the last.
    pub log_likelihood: Vec<f64>,
    pub iterations: usize,
}

struct Component {
    mean: Pixel2,
    var: (f64, f64),
    weight: f64,
}

impl Component {
    /// `log π − ½ log((2π)² σ_u² σ_v²)`
    fn log_norm(&self) -> f64 {
        self.weight.ln() - 0.5 * ((2.0 * PI).powi(2) * self.var.0 * self.var.1).ln()
    }
}

pub fn run(points: &[Pixel2], n: usize, params: &ClusterParams) -> Result<GmmFit> {
    params.validate()?;
    check_counts(points, n)?;
    let m = points.len();
    let floor = params.covariance_floor;
    let min_weight = 1.0 / (10.0 * m as f64);

    let mut init_rng = rng::seeded(params.seed);
    let seeds = kmeans::plus_plus(points, n, &mut init_rng);
    let init = kmeans::lloyd(points, seeds, INIT_KMEANS_ITERS);
    let mut comps: Vec<Component> = init
        .centers
        .iter()
        .enumerate()
        .map(|(k, &mean)| {
            let members: Vec<&Pixel2> =
                points.iter().zip(&init.labels).filter(|(_, &l)| l == k).map(|(p, _)| p).collect();
            let count = members.len().max(1) as f64;
            let vu = members.iter().map(|p| (p.u - mean.u).powi(2)).sum::<f64>() / count;
            let vv = members.iter().map(|p| (p.v - mean.v).powi(2)).sum::<f64>() / count;
            Component { mean, var: (vu.max(floor), vv.max(floor)), weight: count }
        })
        .collect();
    let total: f64 = comps.iter().map(|c| c.weight).sum();
    comps.iter_mut().for_each(|c| c.weight /= total);

    let mut resp = vec![0.0; m * n];
    let mut log_likelihood = Vec::new();
    let mut iterations = 0;
    let mut ll = e_step(points, &comps, &mut resp);
    log_likelihood.push(ll);

    while iterations < params.max_iters {
        iterations += 1;
        m_step(points, &resp, &mut comps, floor);
        check_collapse(&comps, min_weight)?;
        let next = e_step(points, &comps, &mut resp);
        log_likelihood.push(next);
        let gain = next - ll;
        ll = next;
        if gain < params.tol {
            break;
        }
    }

    Ok(GmmFit {
        means: comps.iter().map(|c| c.mean).collect(),
        variances: comps.iter().map(|c| c.var).collect(),
        weights: comps.iter().map(|c| c.weight).collect(),
        log_likelihood,
        iterations,
    })
}

fn check_collapse(comps: &[Component], min_weight: f64) -> Result<()> {
    match comps.iter().enumerate().find(|(_, c)| !(c.weight >= min_weight)) {
        Some((k, c)) => Err(Error::DegenerateFit { component: k, weight: c.weight }),
        None => Ok(()),
    }
}

/// Fills `resp` with posterior responsibilities and returns the total
/// log-likelihood.
fn e_step(points: &[Pixel2], comps: &[Component], resp: &mut [f64]) -> f64 {
    let n = comps.len();
    let consts: Vec<(f64, f64, f64)> =
        comps.iter().map(|c| (c.log_norm(), 0.5 / c.var.0, 0.5 / c.var.1)).collect();
    let mut ll = 0.0;
    for (i, p) in points.iter().enumerate() {
        let row = &mut resp[i * n..(i + 1) * n];
        let mut max = f64::NEG_INFINITY;
        for ((r, c), &(norm, hu, hv)) in row.iter_mut().zip(comps).zip(&consts) {
            let du = p.u - c.mean.u;
            let dv = p.v - c.mean.v;
            *r = norm - du * du * hu - dv * dv * hv;
            max = max.max(*r);
        }
        let mut sum = 0.0;
        for r in row.iter_mut() {
            *r = (*r - max).exp();
            sum += *r;
        }
        for r in row.iter_mut() {
            *r /= sum;
        }
        ll += max + sum.ln();
    }
    ll
}

fn m_step(points: &[Pixel2], resp: &[f64], comps: &mut [Component], floor: f64) {
    let n = comps.len();
    let m = points.len() as f64;
    for (k, comp) in comps.iter_mut().enumerate() {
        let (mut nk, mut su, mut sv) = (0.0, 0.0, 0.0);
        for (i, p) in points.iter().enumerate() {
            let r = resp[i * n + k];
            nk += r;
            su += r * p.u;
            sv += r * p.v;
        }
        comp.weight = nk / m;
        if nk <= 0.0 {
            continue;
        }
        let mean = Pixel2::new(su / nk, sv / nk);
        let (mut qu, mut qv) = (0.0, 0.0);
        for (i, p) in points.iter().enumerate() {
            let r = resp[i * n + k];
            qu += r * (p.u - mean.u).powi(2);
            qv += r * (p.v - mean.v).powi(2);
        }
        comp.mean = mean;
        comp.var = ((qu / nk).max(floor), (qv / nk).max(floor));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Method;
    use rand::Rng;

    /// Standard normal draw (Box-Muller).
    fn normal(rng: &mut impl Rng) -> f64 {
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    #[test]
    fn single_component_mean_is_sample_mean() {
        let mut rng = rng::seeded(1);
        let pts: Vec<Pixel2> =
            (0..300).map(|_| Pixel2::new(5.0 + normal(&mut rng), -2.0 + normal(&mut rng))).collect();
        let fit = run(&pts, 1, &ClusterParams::defaults(Method::Gmm)).unwrap();
        let mean = crate::geometry::mean(&pts);
        assert!((fit.means[0].u - mean.u).abs() < 1e-12 && (fit.means[0].v - mean.v).abs() < 1e-12);
        assert_eq!(fit.weights, vec![1.0]);
    }

    #[test]
    fn two_blobs_recover_their_sample_means() {
        let mut rng = rng::seeded(2);
        let a: Vec<Pixel2> = (0..500).map(|_| Pixel2::new(normal(&mut rng), normal(&mut rng))).collect();
        let b: Vec<Pixel2> =
            (0..500).map(|_| Pixel2::new(50.0 + normal(&mut rng), 50.0 + normal(&mut rng))).collect();
        let pts: Vec<Pixel2> = a.iter().chain(&b).copied().collect();
        let fit = run(&pts, 2, &ClusterParams::defaults(Method::Gmm).with_seed(4)).unwrap();
        let mut means = fit.means.clone();
        means.sort_by(|x, y| x.u.total_cmp(&y.u));
        assert!(means[0].dist(&crate::geometry::mean(&a)) < 0.5);
        assert!(means[1].dist(&crate::geometry::mean(&b)) < 0.5);
    }

    #[test]
    fn log_likelihood_never_decreases() {
        let mut rng = rng::seeded(3);
        let pts: Vec<Pixel2> =
            (0..200).map(|_| Pixel2::new(rng.gen_range(0.0..60.0), rng.gen_range(0.0..20.0))).collect();
        let fit = run(&pts, 6, &ClusterParams::defaults(Method::Gmm).with_seed(9)).unwrap();
        for w in fit.log_likelihood.windows(2) {
            assert!(w[1] >= w[0] - 1e-9 * w[0].abs(), "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn collapsed_component_is_reported() {
        let comp = |weight| Component { mean: Pixel2::default(), var: (1.0, 1.0), weight };
        let min_weight = 1.0 / (10.0 * 100.0);
        assert!(check_collapse(&[comp(0.5), comp(0.5)], min_weight).is_ok());
        let err = check_collapse(&[comp(0.9995), comp(0.0005)], min_weight).unwrap_err();
        assert!(matches!(err, Error::DegenerateFit { component: 1, .. }));
    }
}
