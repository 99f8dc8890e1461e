//! Cluster-validity indices (silhouette, Calinski-Harabasz) and two shape
//! diagnostics: coverage radius and spacing uniformity.

use rand::seq::index::sample;

use crate::clustering::Labels;
use crate::error::{Error, Result};
use crate::rng;
use crate::types::{Centroids, OrderedShape2D, Pixel2, PointSet};

/// Default point cap for [`silhouette_capped`].
pub const DEFAULT_SC_CAP: usize = 2000;

fn check_lengths(data: &PointSet, labels: &Labels) -> Result<()> {
    if data.len() != labels.len() {
        return Err(Error::InvalidParams(format!(
            "{} points but {} labels",
            data.len(),
            labels.len()
        )));
    }
    Ok(())
}

/// Mean silhouette over all points. Points alone in their cluster score 0.
pub fn silhouette(data: &PointSet, labels: &Labels) -> Result<f64> {
    check_lengths(data, labels)?;
    silhouette_of(data.points(), labels.as_slice())
}

/// Silhouette on a seeded uniform subsample of at most `cap` points when
/// the data is larger than `cap`.
pub fn silhouette_capped(data: &PointSet, labels: &Labels, cap: usize, seed: u64) -> Result<f64> {
    check_lengths(data, labels)?;
    if cap == 0 || data.len() <= cap {
        return silhouette_of(data.points(), labels.as_slice());
    }
    let mut idx = sample(&mut rng::seeded(seed), data.len(), cap).into_vec();
    idx.sort_unstable();
    let pts: Vec<Pixel2> = idx.iter().map(|&i| data.points()[i]).collect();
    let labs: Vec<usize> = idx.iter().map(|&i| labels.as_slice()[i]).collect();
    silhouette_of(&pts, &labs)
}

fn silhouette_of(points: &[Pixel2], labels: &[usize]) -> Result<f64> {
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &l in labels {
        sizes[l] += 1;
    }
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(Error::SingleCluster);
    }
    let mut sums = vec![0.0; k];
    let mut total = 0.0;
    for (i, p) in points.iter().enumerate() {
        let own = labels[i];
        if sizes[own] == 1 {
            continue;
        }
        sums.iter_mut().for_each(|s| *s = 0.0);
        for (q, &l) in points.iter().zip(labels) {
            sums[l] += p.dist(q);
        }
        let a = sums[own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| sums[c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / points.len() as f64)
}

/// Between-cluster over within-cluster scatter, each divided by its degrees
/// of freedom. Zero within-cluster scatter yields `f64::INFINITY`.
pub fn calinski_harabasz(data: &PointSet, labels: &Labels) -> Result<f64> {
    check_lengths(data, labels)?;
    let pts = data.points();
    let labs = labels.as_slice();
    let m = pts.len();
    let kmax = labs.iter().copied().max().map_or(0, |x| x + 1);
    let mut acc = vec![(0.0, 0.0, 0usize); kmax];
    for (p, &l) in pts.iter().zip(labs) {
        acc[l].0 += p.u;
        acc[l].1 += p.v;
        acc[l].2 += 1;
    }
    let k = acc.iter().filter(|a| a.2 > 0).count();
    if k < 2 || k + 1 > m {
        return Err(Error::InvalidK { k, max: m.saturating_sub(1) });
    }
    let overall = crate::geometry::mean(pts);
    let means: Vec<Pixel2> = acc
        .iter()
        .map(|a| if a.2 > 0 { Pixel2::new(a.0 / a.2 as f64, a.1 / a.2 as f64) } else { Pixel2::default() })
        .collect();
    let bss: f64 = acc.iter().zip(&means).map(|(a, mu)| a.2 as f64 * mu.dist2(&overall)).sum();
    let wss: f64 = pts.iter().zip(labs).map(|(p, &l)| p.dist2(&means[l])).sum();
    if wss == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((bss / (k - 1) as f64) / (wss / (m - k) as f64))
}

/// Largest distance from any data point to its nearest centroid.
pub fn coverage_radius(data: &PointSet, centroids: &Centroids) -> f64 {
    coverage_of(data.points(), centroids.points())
}

pub(crate) fn coverage_of(points: &[Pixel2], centers: &[Pixel2]) -> f64 {
    points
        .iter()
        .map(|p| crate::clustering::nearest(p, centers).1)
        .fold(0.0, f64::max)
        .sqrt()
}

/// Coefficient of variation (population std / mean) of consecutive point
/// distances, including the closing edge for contours.
pub fn spacing_cv(shape: &OrderedShape2D) -> Result<f64> {
    let pts = shape.points();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints { required: 3, found: pts.len() });
    }
    let mut gaps: Vec<f64> = pts.windows(2).map(|w| w[0].dist(&w[1])).collect();
    if shape.is_closed() {
        gaps.push(pts[pts.len() - 1].dist(&pts[0]));
    }
    let n = gaps.len() as f64;
    let mean = gaps.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return Ok(0.0);
    }
    let var = gaps.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / n;
    Ok(var.sqrt() / mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering;
    use crate::types::ShapeConfig;

    fn set(raw: &[(f64, f64)]) -> PointSet {
        PointSet::new(raw.iter().map(|&p| p.into()).collect()).unwrap()
    }

    fn labels(raw: &[usize]) -> Labels {
        Labels::new(raw.to_vec(), raw.iter().max().unwrap() + 1).unwrap()
    }

    #[test]
    fn silhouette_two_pairs() {
        let data = set(&[(0.0, 0.0), (0.0, 1.0), (10.0, 0.0), (10.0, 1.0)]);
        let sc = silhouette(&data, &labels(&[0, 0, 1, 1])).unwrap();
        // a = 1, b = (10 + √101)/2 for every point
        let b = (10.0 + 101f64.sqrt()) / 2.0;
        assert!((sc - (b - 1.0) / b).abs() < 1e-12);
        assert!((sc - 0.9002).abs() < 1e-4);
    }

    #[test]
    fn silhouette_singletons_and_single_cluster() {
        let data = set(&[(0.0, 0.0), (3.0, 0.0), (9.0, 1.0)]);
        assert_eq!(silhouette(&data, &labels(&[0, 1, 2])).unwrap(), 0.0);
        assert!(matches!(silhouette(&data, &labels(&[0, 0, 0])), Err(Error::SingleCluster)));
    }

    #[test]
    fn silhouette_cap_is_exact_below_cap() {
        let data = set(&[(0.0, 0.0), (0.0, 1.0), (10.0, 0.0), (10.0, 1.0)]);
        let l = labels(&[0, 0, 1, 1]);
        assert_eq!(silhouette_capped(&data, &l, 10, 1).unwrap(), silhouette(&data, &l).unwrap());
    }

    #[test]
    fn ch_examples() {
        let data = set(&[(0.0, 0.0), (2.0, 2.0), (1.0, 1.0)]);
        assert_eq!(calinski_harabasz(&data, &labels(&[0, 0, 1])).unwrap(), 0.0);
        let rep = set(&[(0.0, 0.0), (0.0, 0.0), (5.0, 5.0), (5.0, 5.0)]);
        assert_eq!(calinski_harabasz(&rep, &labels(&[0, 0, 1, 1])).unwrap(), f64::INFINITY);
        // means (1/3, 1/3) and (31/3, 31/3), overall mean (16/3, 16/3)
        let six = set(&[(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (10.0, 10.0), (10.0, 11.0), (11.0, 10.0)]);
        let ch = calinski_harabasz(&six, &labels(&[0, 0, 0, 1, 1, 1])).unwrap();
        // BSS = 2 * 3 * (5² + 5²) = 300, WSS = 2 * 4/3, CH = 300 / ((8/3) / 4) = 450
        assert!((ch - 450.0).abs() < 1e-9, "{ch}");
        assert!(matches!(calinski_harabasz(&six, &labels(&[0; 6])), Err(Error::InvalidK { .. })));
    }

    #[test]
    fn coverage_examples() {
        let data = set(&[(0.0, 0.0), (10.0, 0.0)]);
        let c = Centroids::new(data.points().to_vec(), ShapeConfig::Centerline(2)).unwrap();
        assert_eq!(coverage_radius(&data, &c), 0.0);
        assert_eq!(coverage_of(data.points(), &[Pixel2::new(0.0, 0.0)]), 10.0);
        let segment: Vec<Pixel2> = (0..=1000).map(|i| Pixel2::new(i as f64 / 10.0, 0.0)).collect();
        let ideal: Vec<Pixel2> = [10.0, 30.0, 50.0, 70.0, 90.0].iter().map(|&u| Pixel2::new(u, 0.0)).collect();
        assert!((coverage_of(&segment, &ideal) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn spacing_examples() {
        let line = Centroids::new(
            (0..5).map(|i| Pixel2::new(i as f64 * 3.0, 1.0)).collect(),
            ShapeConfig::Centerline(5),
        )
        .unwrap();
        assert_eq!(spacing_cv(&ordering::sort(&line).unwrap()).unwrap(), 0.0);
        let uneven = Centroids::new(
            vec![Pixel2::new(0.0, 0.0), Pixel2::new(1.0, 0.0), Pixel2::new(4.0, 0.0)],
            ShapeConfig::Centerline(3),
        )
        .unwrap();
        assert!((spacing_cv(&ordering::sort(&uneven).unwrap()).unwrap() - 0.5).abs() < 1e-12);
        let octagon: Vec<Pixel2> = (0..8)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 8.0;
                Pixel2::new(50.0 + 20.0 * t.cos(), 50.0 + 20.0 * t.sin())
            })
            .collect();
        let oct = ordering::sort(&Centroids::new(octagon, ShapeConfig::Contour(8)).unwrap()).unwrap();
        assert!(spacing_cv(&oct).unwrap() < 1e-12);
        let two = ordering::sort(
            &Centroids::new(vec![Pixel2::new(0.0, 0.0), Pixel2::new(1.0, 0.0)], ShapeConfig::Centerline(2)).unwrap(),
        )
        .unwrap();
        assert!(matches!(spacing_cv(&two), Err(Error::TooFewPoints { .. })));
    }
}
