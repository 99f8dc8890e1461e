//! Lloyd's k-means with k-means++ seeding and best-of-restarts selection.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng as _;

use super::{check_counts, nearest};
use crate::error::Result;
use crate::rng::{self, Rng};
use crate::types::{ClusterParams, Pixel2};

#[derive(Debug, Clone, PartialEq)]
pub struct KmeansFit {
    pub centers: Vec<Pixel2>,
    pub labels: Vec<usize>,
    /// Within-cluster sum of squared distances.
    pub inertia: f64,
    /// Lloyd iterations of the winning restart.
    pub iterations: usize,
}

/// Best of `params.restarts` runs, each seeded from its own stream.
pub fn run(points: &[Pixel2], n: usize, params: &ClusterParams) -> Result<KmeansFit> {
    params.validate()?;
    check_counts(points, n)?;
    let mut best: Option<KmeansFit> = None;
    for restart in 0..params.restarts {
        let mut rng = rng::seeded(rng::mix(params.seed, restart as u64));
        let seeds = plus_plus(points, n, &mut rng);
        let fit = lloyd(points, seeds, params.max_iters);
        if best.as_ref().is_none_or(|b| fit.inertia < b.inertia) {
            best = Some(fit);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

/// k-means++ seeding: first centre uniform, then proportional to squared
/// distance from the nearest chosen centre.
pub fn plus_plus(points: &[Pixel2], n: usize, rng: &mut Rng) -> Vec<Pixel2> {
    let mut centers = Vec::with_capacity(n);
    centers.push(points[rng.gen_range(0..points.len())]);
    let mut d2: Vec<f64> = points.iter().map(|p| p.dist2(&centers[0])).collect();
    while centers.len() < n {
        let next = match WeightedIndex::new(&d2) {
            Ok(dist) => dist.sample(rng),
            // all remaining mass is zero: every point coincides with a centre
            Err(_) => rng.gen_range(0..points.len()),
        };
        let c = points[next];
        centers.push(c);
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(p.dist2(&c));
        }
    }
    centers
}

/// Lloyd iterations from the given centres until the assignment stops
/// changing or `max_iters` updates have run.
pub fn lloyd(points: &[Pixel2], mut centers: Vec<Pixel2>, max_iters: usize) -> KmeansFit {
    let n = centers.len();
    let mut labels: Vec<usize> = points.iter().map(|p| nearest(p, &centers).0).collect();
    let mut sums = vec![(0.0, 0.0, 0usize); n];
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        sums.iter_mut().for_each(|s| *s = (0.0, 0.0, 0));
        for (p, &l) in points.iter().zip(&labels) {
            let s = &mut sums[l];
            s.0 += p.u;
            s.1 += p.v;
            s.2 += 1;
        }
        for (c, s) in centers.iter_mut().zip(&sums) {
            if s.2 > 0 {
                *c = Pixel2::new(s.0 / s.2 as f64, s.1 / s.2 as f64);
            }
        }
        let mut changed = false;
        for (k, s) in sums.iter().enumerate() {
            if s.2 == 0 {
                repair_empty(points, &mut centers, &labels, k);
                changed = true;
            }
        }
        for (p, l) in points.iter().zip(labels.iter_mut()) {
            let k = nearest(p, &centers).0;
            if k != *l {
                *l = k;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let inertia = points.iter().zip(&labels).map(|(p, &l)| p.dist2(&centers[l])).sum();
    KmeansFit { centers, labels, inertia, iterations }
}

/// Moves empty cluster `k` onto the point farthest from its own centre.
fn repair_empty(points: &[Pixel2], centers: &mut [Pixel2], labels: &[usize], k: usize) {
    let mut far = (0, -1.0);
    for (i, p) in points.iter().enumerate() {
        let d = p.dist2(&centers[labels[i]]);
        if d > far.1 {
            far = (i, d);
        }
    }
    centers[k] = points[far.0];
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Method;

    fn line(xs: &[f64]) -> Vec<Pixel2> {
        xs.iter().map(|&x| Pixel2::new(x, 0.0)).collect()
    }

    /// Exhaustive optimum over all labelings into at most `n` groups.
    fn brute_force_inertia(points: &[Pixel2], n: usize) -> f64 {
        let m = points.len();
        let mut best = f64::INFINITY;
        let total = n.pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let mut groups = vec![Vec::new(); n];
            for p in points {
                groups[c % n].push(*p);
                c /= n;
            }
            let cost: f64 = groups
                .iter()
                .filter(|g| !g.is_empty())
                .map(|g| {
                    let mu = crate::geometry::mean(g);
                    g.iter().map(|p| p.dist2(&mu)).sum::<f64>()
                })
                .sum();
            best = best.min(cost);
        }
        best
    }

    #[test]
    fn one_dimensional_pairs_match_brute_force() {
        let pts = line(&[0.0, 1.0, 9.0, 10.0]);
        let params = ClusterParams::defaults(Method::Kma).with_restarts(10);
        let fit = run(&pts, 2, &params).unwrap();
        let mut us: Vec<f64> = fit.centers.iter().map(|c| c.u).collect();
        us.sort_by(f64::total_cmp);
        assert_eq!(us, vec![0.5, 9.5]);
        assert!((fit.inertia - brute_force_inertia(&pts, 2)).abs() < 1e-12);
    }

    #[test]
    fn distinct_points_are_recovered_exactly() {
        let pts = vec![
            Pixel2::new(1.0, 1.0),
            Pixel2::new(1.0, 1.0),
            Pixel2::new(4.0, 2.0),
            Pixel2::new(7.0, 9.0),
            Pixel2::new(7.0, 9.0),
        ];
        let fit = run(&pts, 3, &ClusterParams::defaults(Method::Kma)).unwrap();
        assert_eq!(fit.inertia, 0.0);
        for p in &pts {
            assert!(fit.centers.contains(p));
        }
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let pts = line(&[0.0, 2.0, 7.0]);
        let fit = run(&pts, 1, &ClusterParams::defaults(Method::Kma)).unwrap();
        assert_eq!(fit.centers, vec![Pixel2::new(3.0, 0.0)]);
    }

    #[test]
    fn empty_cluster_is_reseeded() {
        // both seeds at the same spot: the second cluster starts empty
        let pts = line(&[0.0, 0.0, 10.0]);
        let fit = lloyd(&pts, vec![Pixel2::new(0.0, 0.0); 2], 10);
        let mut us: Vec<f64> = fit.centers.iter().map(|c| c.u).collect();
        us.sort_by(f64::total_cmp);
        assert_eq!(us, vec![0.0, 10.0]);
    }

    #[test]
    fn deterministic_for_seed() {
        let pts: Vec<Pixel2> = (0..200).map(|i| Pixel2::new((i * 37 % 101) as f64, (i * 11 % 53) as f64)).collect();
        let p = ClusterParams::defaults(Method::Kma).with_seed(5);
        assert_eq!(run(&pts, 6, &p).unwrap(), run(&pts, 6, &p).unwrap());
    }
}
