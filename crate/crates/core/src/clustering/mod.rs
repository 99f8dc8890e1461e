//! The four interchangeable clustering backends. Each maps a point set to
//! exactly N centres, all of them convex combinations of input points.

pub mod fcm;
pub mod gmm;
pub mod kmeans;
pub mod som;

use crate::error::{Error, Result};
use crate::types::{Centroids, ClusterParams, Method, Pixel2, PointSet, ShapeConfig, SomTopology};

/// Hard cluster assignment, one index per input point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels(Vec<usize>);

impl Labels {
    pub fn new(labels: Vec<usize>, clusters: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= clusters) {
            return Err(Error::InvalidParams(format!("label {bad} out of range for {clusters} clusters")));
        }
        Ok(Self(labels))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Index of the nearest centre; ties go to the lowest index.
pub(crate) fn nearest(p: &Pixel2, centers: &[Pixel2]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (k, c) in centers.iter().enumerate() {
        let d = p.dist2(c);
        if d < best.1 {
            best = (k, d);
        }
    }
    best
}

pub(crate) fn check_counts(points: &[Pixel2], n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("cluster count must be at least 1".into()));
    }
    if points.len() < n {
        return Err(Error::InsufficientPoints { points: points.len(), clusters: n });
    }
    Ok(())
}

pub fn assign_labels(data: &PointSet, centroids: &Centroids) -> Labels {
    assign_to(data.points(), centroids.points())
}

pub(crate) fn assign_to(points: &[Pixel2], centers: &[Pixel2]) -> Labels {
    Labels(points.iter().map(|p| nearest(p, centers).0).collect())
}

fn config_for(topology: SomTopology) -> ShapeConfig {
    match topology {
        SomTopology::Chain(n) => ShapeConfig::Centerline(n),
        SomTopology::Ring(n) => ShapeConfig::Contour(n),
        SomTopology::Grid { rows, cols } => ShapeConfig::Surface { rows, cols },
    }
}

/// Kohonen map on `topology`; centroids are returned in lattice order.
pub fn fit_som(data: &PointSet, topology: SomTopology, params: &ClusterParams) -> Result<Centroids> {
    let fit = som::train(data.points(), topology, params)?;
    Centroids::new(fit.weights, config_for(topology))?.with_lattice(topology)
}

pub fn fit_kmeans(data: &PointSet, config: ShapeConfig, params: &ClusterParams) -> Result<Centroids> {
    let fit = kmeans::run(data.points(), config.n(), params)?;
    Centroids::new(fit.centers, config)
}

pub fn fit_fcm(data: &PointSet, config: ShapeConfig, params: &ClusterParams) -> Result<Centroids> {
    let fit = fcm::run(data.points(), config.n(), params)?;
    Centroids::new(fit.centers, config)
}

pub fn fit_gmm(data: &PointSet, config: ShapeConfig, params: &ClusterParams) -> Result<Centroids> {
    let fit = gmm::run(data.points(), config.n(), params)?;
    Centroids::new(fit.means, config)
}

/// Runs the backend selected by `params.method`. SOM uses the lattice
/// matching `config`.
pub fn fit(data: &PointSet, config: ShapeConfig, params: &ClusterParams) -> Result<Centroids> {
    config.validate()?;
    match params.method {
        Method::Som => fit_som(data, config.topology(), params),
        Method::Kma => fit_kmeans(data, config, params),
        Method::Fcm => fit_fcm(data, config, params),
        Method::Gmm => fit_gmm(data, config, params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn px(u: f64, v: f64) -> Pixel2 {
        Pixel2::new(u, v)
    }

    #[test]
    fn labels_for_centroids_themselves() {
        let pts = vec![px(0.0, 0.0), px(5.0, 5.0), px(9.0, 1.0)];
        let data = PointSet::new(pts.clone()).unwrap();
        let c = Centroids::new(pts, ShapeConfig::Centerline(3)).unwrap();
        assert_eq!(assign_labels(&data, &c).as_slice(), &[0, 1, 2]);
    }

    #[test]
    fn tie_goes_to_lowest_index() {
        let data = PointSet::new(vec![px(5.0, 0.0)]).unwrap();
        let c = Centroids::new(vec![px(0.0, 0.0), px(10.0, 0.0)], ShapeConfig::Centerline(2)).unwrap();
        assert_eq!(assign_labels(&data, &c).as_slice(), &[0]);
    }

    #[test]
    fn pairs_go_to_their_means() {
        // distances checked by hand: each point is 0.5 from its own mean and
        // more than 9 from the other one
        let data = PointSet::new(vec![px(0.0, 0.0), px(10.0, 0.0), px(0.0, 1.0), px(10.0, 1.0)]).unwrap();
        let c = Centroids::new(vec![px(0.0, 0.5), px(10.0, 0.5)], ShapeConfig::Centerline(2)).unwrap();
        assert_eq!(assign_labels(&data, &c).as_slice(), &[0, 1, 0, 1]);
    }

    #[test]
    fn every_backend_rejects_too_few_points() {
        let data = PointSet::new(vec![px(0.0, 0.0), px(1.0, 0.0)]).unwrap();
        for method in Method::ALL {
            let params = ClusterParams::defaults(method);
            let err = fit(&data, ShapeConfig::Centerline(3), &params).unwrap_err();
            assert!(matches!(err, Error::InsufficientPoints { points: 2, clusters: 3 }), "{method}: {err}");
        }
    }
}
