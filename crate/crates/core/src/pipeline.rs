//! End-to-end detection: image or mask in, ordered shape out.

use std::time::Instant;

use crate::clustering;
use crate::error::{Error, Result};
use crate::imaging::{
    crop_mask, crop_roi, extract_boundary, hsv_threshold, largest_component, mask_to_points, morph, BinaryMask,
    HsvRange, MorphMode, RgbImage, RoiRect,
};
use crate::io::PnmImage;
use crate::ordering;
use crate::types::{Centroids, ClusterParams, OrderedShape2D, PointSet, ShapeConfig};

/// Components smaller than this are ignored unless configured otherwise.
pub const DEFAULT_MIN_AREA: usize = 20;

/// Measures the duration of a piece of work in seconds.
pub trait Clock: Sync {
    fn time<T>(&self, work: impl FnOnce() -> T) -> (T, f64);
}

/// Monotonic wall-clock time.
#[derive(Debug, Clone, Copy, Default)]
pub struct WallClock;

impl Clock for WallClock {
    fn time<T>(&self, work: impl FnOnce() -> T) -> (T, f64) {
        let start = Instant::now();
        let out = work();
        (out, start.elapsed().as_secs_f64())
    }
}

/// Reports the same duration for every measurement.
#[derive(Debug, Clone, Copy)]
pub struct FixedClock(pub f64);

impl Clock for FixedClock {
    fn time<T>(&self, work: impl FnOnce() -> T) -> (T, f64) {
        (work(), self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputImage {
    Rgb(RgbImage),
    Mask(BinaryMask),
}

impl InputImage {
    pub fn width(&self) -> usize {
        match self {
            InputImage::Rgb(i) => i.width(),
            InputImage::Mask(m) => m.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            InputImage::Rgb(i) => i.height(),
            InputImage::Mask(m) => m.height(),
        }
    }
}

impl TryFrom<PnmImage> for InputImage {
    type Error = Error;

    fn try_from(img: PnmImage) -> Result<Self> {
        match img {
            PnmImage::Rgb(i) => Ok(InputImage::Rgb(i)),
            PnmImage::Mask(m) => Ok(InputImage::Mask(m)),
            PnmImage::Depth(_) => Err(Error::UnsupportedVariant("16-bit input where an RGB image or mask was expected".into())),
        }
    }
}

/// Segmentation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segmentation {
    pub roi: Option<RoiRect>,
    /// Required for RGB input, ignored for masks.
    pub hsv: Option<HsvRange>,
    pub min_area: usize,
}

impl Default for Segmentation {
    fn default() -> Self {
        Self { roi: None, hsv: None, min_area: DEFAULT_MIN_AREA }
    }
}

/// Crop, threshold (RGB only), open then close with a 3×3 square, keep the
/// largest component. The result is returned in full-frame coordinates.
pub fn object_mask(input: &InputImage, seg: &Segmentation) -> Result<BinaryMask> {
    let (w, h) = (input.width(), input.height());
    let roi = seg.roi.unwrap_or(RoiRect::new(0, 0, w, h));
    let raw = match input {
        InputImage::Rgb(img) => {
            let hsv = seg.hsv.ok_or_else(|| Error::Usage("--hsv is required for RGB input".into()))?;
            hsv_threshold(&crop_roi(img, roi)?, &hsv)
        }
        InputImage::Mask(m) => crop_mask(m, roi)?,
    };
    let cleaned = morph(&morph(&raw, MorphMode::Open, 1)?, MorphMode::Close, 1)?;
    let object = largest_component(&cleaned, seg.min_area)?;
    if roi.u0 == 0 && roi.v0 == 0 && roi.width == w && roi.height == h {
        return Ok(object);
    }
    let mut full = BinaryMask::new(w, h)?;
    for v in 0..roi.height {
        for u in 0..roi.width {
            if object.get(u, v) {
                full.set(u + roi.u0, v + roi.v0, true);
            }
        }
    }
    Ok(full)
}

/// Points handed to the clustering backend: the boundary for contours, all
/// object pixels otherwise.
pub fn clustering_input(object: &BinaryMask, config: ShapeConfig) -> Result<PointSet> {
    match config {
        ShapeConfig::Contour(_) => mask_to_points(&extract_boundary(object)?),
        _ => mask_to_points(object),
    }
}

/// Runs the configured backend and reports how long the fit took.
pub fn timed_fit(
    points: &PointSet,
    config: ShapeConfig,
    params: &ClusterParams,
    clock: &impl Clock,
) -> Result<(Centroids, f64)> {
    let (fit, secs) = clock.time(|| clustering::fit(points, config, params));
    Ok((fit?, secs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub object: BinaryMask,
    pub points: PointSet,
    pub centroids: Centroids,
    pub shape: OrderedShape2D,
    pub fit_time_s: f64,
}

pub fn detect(
    input: &InputImage,
    seg: &Segmentation,
    config: ShapeConfig,
    params: &ClusterParams,
    clock: &impl Clock,
) -> Result<Detection> {
    config.validate()?;
    let object = object_mask(input, seg)?;
    let points = clustering_input(&object, config)?;
    let (centroids, fit_time_s) = timed_fit(&points, config, params, clock)?;
    let shape = ordering::sort(&centroids)?;
    Ok(Detection { object, points, centroids, shape, fit_time_s })
}
