//! Clustering-based shape detection for deformable objects.
//!
//! A binary mask (or an RGB image segmented by an HSV box) is reduced to a
//! fixed number of ordered, roughly equidistant points describing a
//! centerline, a closed contour or a surface grid. Four clustering backends
//! are available (self-organising map, k-means, fuzzy c-means and a
//! diagonal Gaussian mixture). The ordered shape can be lifted to 3D through
//! a depth frame and a pinhole camera model.
//!
//! ```
//! use shapeclust::{clustering, ordering, ClusterParams, Method, PointSet, ShapeConfig};
//!
//! let pixels = (0..400).map(|i| ((i % 100) as f64, (i / 100) as f64).into()).collect();
//! let data = PointSet::new(pixels).unwrap();
//! let config = ShapeConfig::Centerline(5);
//! let params = ClusterParams::defaults(Method::Som).with_seed(7);
//! let centroids = clustering::fit(&data, config, &params).unwrap();
//! let shape = ordering::sort(&centroids).unwrap();
//! assert_eq!(shape.len(), 5);
//! assert!(shape.points()[0].u < shape.points()[4].u);
//! ```

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod clustering;
pub mod error;
pub mod geometry;
pub mod imaging;
pub mod io;
pub mod lift;
pub mod metrics;
pub mod ordering;
pub mod pipeline;
pub mod rng;
pub mod types;

pub use error::{Error, Result};
pub use imaging::{BinaryMask, HsvRange, RgbImage, RoiRect};
pub use lift::{DepthFrame, Intrinsics};
pub use types::{
    Centroids, ClusterParams, Method, MetricsReport, OrderedShape2D, Pixel2, Point3, PointSet, Shape3D, ShapeConfig,
    SomParams, SomTopology,
};
