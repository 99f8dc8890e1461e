//! Binarization: ROI crop, HSV thresholding, morphological cleanup,
//! largest-component filtering, boundary extraction and mask-to-points.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::types::{Pixel2, PointSet};

/// 8-bit RGB raster, row-major, three bytes per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParams(format!("image must be non-empty, got {width}x{height}")));
        }
        if data.len() != 3 * width * height {
            return Err(Error::InvalidParams(format!(
                "{width}x{height} RGB image needs {} bytes, got {}",
                3 * width * height,
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        Self::new(width, height, rgb.repeat(width * height))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, u: usize, v: usize) -> [u8; 3] {
        let i = 3 * (v * self.width + u);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn set(&mut self, u: usize, v: usize, rgb: [u8; 3]) {
        let i = 3 * (v * self.width + u);
        self.data[i..i + 3].copy_from_slice(&rgb);
    }
}

/// Inclusive HSV box. Hue in degrees; `h_lo > h_hi` wraps through 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsvRange {
    pub h_lo: f64,
    pub h_hi: f64,
    pub s_lo: f64,
    pub s_hi: f64,
    pub v_lo: f64,
    pub v_hi: f64,
}

impl HsvRange {
    pub fn new(h_lo: f64, h_hi: f64, s_lo: f64, s_hi: f64, v_lo: f64, v_hi: f64) -> Result<Self> {
        let hue_ok = |h: f64| (0.0..360.0).contains(&h);
        let unit_ok = |x: f64| (0.0..=1.0).contains(&x);
        if !hue_ok(h_lo) || !hue_ok(h_hi) {
            return Err(Error::InvalidParams(format!("hue bounds must lie in [0, 360): {h_lo}, {h_hi}")));
        }
        if !(unit_ok(s_lo) && unit_ok(s_hi) && unit_ok(v_lo) && unit_ok(v_hi)) || s_lo > s_hi || v_lo > v_hi {
            return Err(Error::InvalidParams("saturation/value bounds must be ordered within [0, 1]".into()));
        }
        Ok(Self { h_lo, h_hi, s_lo, s_hi, v_lo, v_hi })
    }

    pub fn contains(&self, (h, s, v): (f64, f64, f64)) -> bool {
        let hue_in = if self.h_lo <= self.h_hi {
            h >= self.h_lo && h <= self.h_hi
        } else {
            h >= self.h_lo || h <= self.h_hi
        };
        hue_in && s >= self.s_lo && s <= self.s_hi && v >= self.v_lo && v <= self.v_hi
    }
}

/// One flag per pixel; `true` is object, `false` background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParams(format!("mask must be non-empty, got {width}x{height}")));
        }
        Ok(Self { width, height, bits: vec![false; width * height] })
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        let mut m = Self::new(width, height)?;
        if bits.len() != width * height {
            return Err(Error::InvalidParams(format!(
                "{width}x{height} mask needs {} flags, got {}",
                width * height,
                bits.len()
            )));
        }
        m.bits = bits;
        Ok(m)
    }

    /// Builds a mask with the listed `(u, v)` pixels set.
    pub fn from_pixels(width: usize, height: usize, pixels: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::new(width, height)?;
        for &(u, v) in pixels {
            if u >= width || v >= height {
                return Err(Error::OutOfBounds { u: u as f64, v: v as f64, width, height });
            }
            m.set(u, v, true);
        }
        Ok(m)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, u: usize, v: usize) -> bool {
        self.bits[v * self.width + u]
    }

    pub fn set(&mut self, u: usize, v: usize, value: bool) {
        self.bits[v * self.width + u] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Pixelwise `self ⊆ other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// Rasterizes points back into a mask by rounding to the nearest pixel.
    pub fn from_points(width: usize, height: usize, points: &PointSet) -> Result<Self> {
        let mut m = Self::new(width, height)?;
        for p in points.points() {
            let (u, v) = (p.u.round(), p.v.round());
            if u < 0.0 || v < 0.0 || u >= width as f64 || v >= height as f64 {
                return Err(Error::OutOfBounds { u: p.u, v: p.v, width, height });
            }
            m.set(u as usize, v as usize, true);
        }
        Ok(m)
    }
}

/// Axis-aligned crop rectangle in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoiRect {
    pub u0: usize,
    pub v0: usize,
    pub width: usize,
    pub height: usize,
}

impl RoiRect {
    pub fn new(u0: usize, v0: usize, width: usize, height: usize) -> Self {
        Self { u0, v0, width, height }
    }

    fn check(&self, image_width: usize, image_height: usize) -> Result<()> {
        if self.width == 0
            || self.height == 0
            || self.u0 + self.width > image_width
            || self.v0 + self.height > image_height
        {
            return Err(Error::RoiOutOfBounds {
                u0: self.u0,
                v0: self.v0,
                width: self.width,
                height: self.height,
                image_width,
                image_height,
            });
        }
        Ok(())
    }
}

pub fn crop_roi(image: &RgbImage, roi: RoiRect) -> Result<RgbImage> {
    roi.check(image.width, image.height)?;
    let mut data = Vec::with_capacity(3 * roi.width * roi.height);
    for v in roi.v0..roi.v0 + roi.height {
        let start = 3 * (v * image.width + roi.u0);
        data.extend_from_slice(&image.data[start..start + 3 * roi.width]);
    }
    RgbImage::new(roi.width, roi.height, data)
}

/// Same as [`crop_roi`] for masks, used when the input is already binary.
pub fn crop_mask(mask: &BinaryMask, roi: RoiRect) -> Result<BinaryMask> {
    roi.check(mask.width, mask.height)?;
    let mut bits = Vec::with_capacity(roi.width * roi.height);
    for v in roi.v0..roi.v0 + roi.height {
        let start = v * mask.width + roi.u0;
        bits.extend_from_slice(&mask.bits[start..start + roi.width]);
    }
    BinaryMask::from_bits(roi.width, roi.height, bits)
}

/// Hexcone HSV: hue in degrees `[0, 360)`, saturation and value in `[0, 1]`.
/// Hue is 0 for achromatic colours.
pub fn rgb_to_hsv(r: u8, g: u8, b: u8) -> (f64, f64, f64) {
    let (rf, gf, bf) = (r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0);
    let max = rf.max(gf).max(bf);
    let min = rf.min(gf).min(bf);
    let delta = max - min;
    let v = max;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    if delta == 0.0 {
        return (0.0, s, v);
    }
    let h = if max == rf {
        60.0 * ((gf - bf) / delta)
    } else if max == gf {
        60.0 * ((bf - rf) / delta + 2.0)
    } else {
        60.0 * ((rf - gf) / delta + 4.0)
    };
    let h = if h < 0.0 { h + 360.0 } else { h };
    (if h >= 360.0 { h - 360.0 } else { h }, s, v)
}

pub fn hsv_threshold(image: &RgbImage, range: &HsvRange) -> BinaryMask {
    let bits = image
        .data
        .chunks_exact(3)
        .map(|px| range.contains(rgb_to_hsv(px[0], px[1], px[2])))
        .collect();
    BinaryMask { width: image.width, height: image.height, bits }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphMode {
    Open,
    Close,
}

/// Sliding-window "all" (erode) or "any" (dilate) along one axis, square
/// element of half-width `r`. Out-of-range samples count as background.
fn pass_1d(src: &[bool], w: usize, h: usize, r: usize, horizontal: bool, erode: bool) -> Vec<bool> {
    let mut out = vec![false; src.len()];
    let (lines, len) = if horizontal { (h, w) } else { (w, h) };
    let idx = |line: usize, k: usize| if horizontal { line * w + k } else { k * w + line };
    let mut prefix = vec![0usize; len + 1];
    for line in 0..lines {
        for k in 0..len {
            prefix[k + 1] = prefix[k] + src[idx(line, k)] as usize;
        }
        for k in 0..len {
            let lo = k.saturating_sub(r);
            let hi = (k + r + 1).min(len);
            let ones = prefix[hi] - prefix[lo];
            out[idx(line, k)] = if erode { ones == 2 * r + 1 } else { ones > 0 };
        }
    }
    out
}

fn erode_or_dilate(bits: &[bool], w: usize, h: usize, r: usize, erode: bool) -> Vec<bool> {
    let tmp = pass_1d(bits, w, h, r, true, erode);
    pass_1d(&tmp, w, h, r, false, erode)
}

/// Morphological opening (erode, dilate) or closing (dilate, erode) with a
/// `(2r+1)²` square element.
///
/// The mask is embedded in a zero-padded canvas `r` pixels wider on each
/// side, so the outside of the image is background throughout and a
/// dilation may grow into the padding before the erosion.
pub fn morph(mask: &BinaryMask, mode: MorphMode, kernel_radius: usize) -> Result<BinaryMask> {
    if kernel_radius < 1 {
        return Err(Error::InvalidParams("kernel radius must be at least 1".into()));
    }
    let r = kernel_radius;
    let (pw, ph) = (mask.width + 2 * r, mask.height + 2 * r);
    let mut padded = vec![false; pw * ph];
    for v in 0..mask.height {
        let src = &mask.bits[v * mask.width..(v + 1) * mask.width];
        padded[(v + r) * pw + r..(v + r) * pw + r + mask.width].copy_from_slice(src);
    }
    let (first, second) = match mode {
        MorphMode::Open => (true, false),
        MorphMode::Close => (false, true),
    };
    let stage = erode_or_dilate(&padded, pw, ph, r, first);
    let done = erode_or_dilate(&stage, pw, ph, r, second);
    let mut bits = Vec::with_capacity(mask.width * mask.height);
    for v in 0..mask.height {
        bits.extend_from_slice(&done[(v + r) * pw + r..(v + r) * pw + r + mask.width]);
    }
    Ok(BinaryMask { width: mask.width, height: mask.height, bits })
}

/// Labels 8-connected components. Returns per-pixel labels (0 = background,
/// components numbered from 1 in raster order of their first pixel) and
/// the area of each component.
pub fn label_components(mask: &BinaryMask) -> (Vec<u32>, Vec<usize>) {
    let (w, h) = (mask.width, mask.height);
    let mut labels = vec![0u32; w * h];
    let mut areas = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if !mask.bits[start] || labels[start] != 0 {
            continue;
        }
        let label = areas.len() as u32 + 1;
        labels[start] = label;
        queue.push_back(start);
        let mut area = 0;
        while let Some(i) = queue.pop_front() {
            area += 1;
            let (u, v) = ((i % w) as isize, (i / w) as isize);
            for dv in -1..=1 {
                for du in -1..=1 {
                    let (nu, nv) = (u + du, v + dv);
                    if nu < 0 || nv < 0 || nu >= w as isize || nv >= h as isize {
                        continue;
                    }
                    let j = nv as usize * w + nu as usize;
                    if mask.bits[j] && labels[j] == 0 {
                        labels[j] = label;
                        queue.push_back(j);
                    }
                }
            }
        }
        areas.push(area);
    }
    (labels, areas)
}

/// Keeps only the largest 8-connected component (earliest in raster order
/// on ties). Fails when the mask is empty or that component is smaller
/// than `min_area`.
pub fn largest_component(mask: &BinaryMask, min_area: usize) -> Result<BinaryMask> {
    let (labels, areas) = label_components(mask);
    let best = areas
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, usize)>, (i, &a)| match best {
            Some((_, ba)) if ba >= a => best,
            _ => Some((i, a)),
        });
    match best {
        Some((i, area)) if area >= min_area && area > 0 => {
            let keep = i as u32 + 1;
            let bits = labels.iter().map(|&l| l == keep).collect();
            Ok(BinaryMask { width: mask.width, height: mask.height, bits })
        }
        other => Err(Error::NoComponent { min_area, largest: other.map_or(0, |(_, a)| a) }),
    }
}

/// Foreground pixels with at least one background (or out-of-image)
/// 4-neighbour.
pub fn extract_boundary(mask: &BinaryMask) -> Result<BinaryMask> {
    if mask.count() == 0 {
        return Err(Error::EmptyMask);
    }
    let (w, h) = (mask.width, mask.height);
    let mut bits = vec![false; w * h];
    for v in 0..h {
        for u in 0..w {
            if !mask.get(u, v) {
                continue;
            }
            let edge = u == 0
                || v == 0
                || u + 1 == w
                || v + 1 == h
                || !mask.get(u - 1, v)
                || !mask.get(u + 1, v)
                || !mask.get(u, v - 1)
                || !mask.get(u, v + 1);
            bits[v * w + u] = edge;
        }
    }
    Ok(BinaryMask { width: w, height: h, bits })
}

/// One point per foreground pixel, in raster order.
pub fn mask_to_points(mask: &BinaryMask) -> Result<PointSet> {
    let w = mask.width;
    let points: Vec<Pixel2> = mask
        .bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| Pixel2::new((i % w) as f64, (i / w) as f64))
        .collect();
    if points.is_empty() {
        return Err(Error::EmptyMask);
    }
    PointSet::new(points)
}

fn parse_list<T: FromStr>(s: &str, count: usize, what: &str) -> Result<Vec<T>> {
    let bad = || Error::Parse(format!("{what} expects {count} comma-separated numbers, got `{s}`"));
    let items: Vec<T> = s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    if items.len() != count {
        return Err(bad());
    }
    Ok(items)
}

impl FromStr for HsvRange {
    type Err = Error;

    /// Parses `h_lo,h_hi,s_lo,s_hi,v_lo,v_hi`.
    fn from_str(s: &str) -> Result<Self> {
        let x = parse_list::<f64>(s, 6, "hsv range")?;
        HsvRange::new(x[0], x[1], x[2], x[3], x[4], x[5])
    }
}

impl fmt::Display for HsvRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{},{}", self.h_lo, self.h_hi, self.s_lo, self.s_hi, self.v_lo, self.v_hi)
    }
}

impl FromStr for RoiRect {
    type Err = Error;

    /// Parses `u0,v0,width,height`.
    fn from_str(s: &str) -> Result<Self> {
        let x = parse_list::<usize>(s, 4, "roi")?;
        Ok(RoiRect::new(x[0], x[1], x[2], x[3]))
    }
}

impl fmt::Display for RoiRect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.u0, self.v0, self.width, self.height)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn block(w: usize, h: usize, u0: usize, v0: usize, bw: usize, bh: usize) -> BinaryMask {
        let mut m = BinaryMask::new(w, h).unwrap();
        for v in v0..v0 + bh {
            for u in u0..u0 + bw {
                m.set(u, v, true);
            }
        }
        m
    }

    #[test]
    fn crop_identity_and_center() {
        let data: Vec<u8> = (0..48).collect();
        let img = RgbImage::new(4, 4, data).unwrap();
        assert_eq!(crop_roi(&img, RoiRect::new(0, 0, 4, 4)).unwrap(), img);
        let c = crop_roi(&img, RoiRect::new(1, 1, 2, 2)).unwrap();
        assert_eq!((c.width(), c.height()), (2, 2));
        for v in 0..2 {
            for u in 0..2 {
                assert_eq!(c.get(u, v), img.get(u + 1, v + 1));
            }
        }
        assert!(matches!(
            crop_roi(&img, RoiRect::new(3, 3, 2, 2)),
            Err(Error::RoiOutOfBounds { .. })
        ));
    }

    #[test]
    fn hsv_reference_values() {
        assert_eq!(rgb_to_hsv(255, 0, 0), (0.0, 1.0, 1.0));
        assert_eq!(rgb_to_hsv(128, 128, 128), (0.0, 0.0, 128.0 / 255.0));
        // hand-computed: max = b = 1, delta = 1, h = 60 * (4 + (0 - 128/255)) = 209.882...
        let (h, s, v) = rgb_to_hsv(0, 128, 255);
        assert!((h - 209.882_352_941_176_5).abs() < 1e-9, "{h}");
        assert_eq!((s, v), (1.0, 1.0));
    }

    #[test]
    fn hsv_threshold_uniform_images() {
        let red = RgbImage::filled(3, 2, [255, 0, 0]).unwrap();
        let red_range = HsvRange::new(350.0, 10.0, 0.5, 1.0, 0.5, 1.0).unwrap();
        let blue_range = HsvRange::new(200.0, 260.0, 0.5, 1.0, 0.5, 1.0).unwrap();
        assert_eq!(hsv_threshold(&red, &red_range).count(), 6);
        assert_eq!(hsv_threshold(&red, &blue_range).count(), 0);
    }

    #[test]
    fn hue_wraparound() {
        let r = HsvRange::new(350.0, 10.0, 0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(r.contains((5.0, 0.5, 0.5)));
        assert!(r.contains((355.0, 0.5, 0.5)));
        assert!(!r.contains((180.0, 0.5, 0.5)));
    }

    #[test]
    fn open_removes_speckle_and_keeps_block() {
        let speck = BinaryMask::from_pixels(7, 7, &[(3, 3)]).unwrap();
        assert_eq!(morph(&speck, MorphMode::Open, 1).unwrap().count(), 0);
        let b = block(20, 20, 5, 5, 10, 10);
        assert_eq!(morph(&b, MorphMode::Open, 1).unwrap(), b);
    }

    #[test]
    fn close_fills_one_pixel_gap() {
        // blocks at u in 2..5 and 6..9 with the gap column u = 5
        let mut m = block(12, 8, 2, 2, 3, 4);
        for v in 2..6 {
            for u in 6..9 {
                m.set(u, v, true);
            }
        }
        let closed = morph(&m, MorphMode::Close, 1).unwrap();
        assert_eq!(closed, block(12, 8, 2, 2, 7, 4));
    }

    #[test]
    fn close_keeps_pixels_on_image_border() {
        let m = block(6, 6, 0, 0, 2, 6);
        let closed = morph(&m, MorphMode::Close, 1).unwrap();
        assert!(m.is_subset_of(&closed));
    }

    #[test]
    fn largest_component_examples() {
        let mut m = block(40, 40, 0, 0, 10, 10);
        for (u, v) in [(30, 30), (31, 30), (30, 31), (31, 31), (32, 32)] {
            m.set(u, v, true);
        }
        let out = largest_component(&m, 10).unwrap();
        assert_eq!(out, block(40, 40, 0, 0, 10, 10));
        let empty = BinaryMask::new(5, 5).unwrap();
        assert!(matches!(largest_component(&empty, 1), Err(Error::NoComponent { .. })));
        assert!(matches!(largest_component(&m, 101), Err(Error::NoComponent { largest: 100, .. })));
        let diag = BinaryMask::from_pixels(2, 2, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(label_components(&diag).1, vec![2]);
    }

    #[test]
    fn boundary_examples() {
        let b3 = block(5, 5, 1, 1, 3, 3);
        let ring = extract_boundary(&b3).unwrap();
        assert_eq!(ring.count(), 8);
        assert!(!ring.get(2, 2));
        let single = BinaryMask::from_pixels(3, 3, &[(1, 1)]).unwrap();
        assert_eq!(extract_boundary(&single).unwrap(), single);
        assert_eq!(extract_boundary(&block(6, 6, 1, 1, 4, 4)).unwrap().count(), 12);
        assert!(matches!(extract_boundary(&BinaryMask::new(2, 2).unwrap()), Err(Error::EmptyMask)));
    }

    #[test]
    fn mask_to_points_examples() {
        let m = BinaryMask::from_pixels(4, 3, &[(0, 2), (3, 2), (1, 0)]).unwrap();
        let pts = mask_to_points(&m).unwrap();
        let got: Vec<(f64, f64)> = pts.points().iter().map(|p| (p.u, p.v)).collect();
        assert_eq!(got, vec![(1.0, 0.0), (0.0, 2.0), (3.0, 2.0)]);
        assert_eq!(mask_to_points(&block(2, 2, 0, 0, 2, 2)).unwrap().len(), 4);
        assert!(matches!(mask_to_points(&BinaryMask::new(2, 2).unwrap()), Err(Error::EmptyMask)));
    }

    fn arb_mask() -> impl Strategy<Value = BinaryMask> {
        (1usize..14, 1usize..14).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<bool>(), w * h)
                .prop_map(move |bits| BinaryMask::from_bits(w, h, bits).unwrap())
        })
    }

    proptest! {
        #[test]
        fn morph_is_idempotent_and_ordered(m in arb_mask(), r in 1usize..3) {
            let open = morph(&m, MorphMode::Open, r).unwrap();
            let close = morph(&m, MorphMode::Close, r).unwrap();
            prop_assert_eq!(morph(&open, MorphMode::Open, r).unwrap(), open.clone());
            prop_assert_eq!(morph(&close, MorphMode::Close, r).unwrap(), close.clone());
            prop_assert!(open.is_subset_of(&m));
            prop_assert!(m.is_subset_of(&close));
        }

        #[test]
        fn boundary_is_subset(m in arb_mask()) {
            prop_assume!(m.count() > 0);
            let b = extract_boundary(&m).unwrap();
            prop_assert!(b.is_subset_of(&m));
        }

        #[test]
        fn points_rasterize_back(m in arb_mask()) {
            prop_assume!(m.count() > 0);
            let pts = mask_to_points(&m).unwrap();
            prop_assert_eq!(BinaryMask::from_points(m.width(), m.height(), &pts).unwrap(), m);
        }

        #[test]
        fn largest_component_is_a_component(m in arb_mask()) {
            prop_assume!(m.count() > 0);
            let out = largest_component(&m, 1).unwrap();
            let (labels, areas) = label_components(&out);
            prop_assert_eq!(areas.len(), 1);
            prop_assert!(out.is_subset_of(&m));
            // the kept pixels are a whole component of the input
            let (in_labels, in_areas) = label_components(&m);
            let first = labels.iter().position(|&l| l == 1).unwrap();
            prop_assert_eq!(in_areas[in_labels[first] as usize - 1], areas[0]);
            prop_assert_eq!(areas[0], *in_areas.iter().max().unwrap());
        }
    }

    #[test]
    fn boundary_of_thin_line_is_identity() {
        let m = BinaryMask::from_pixels(8, 8, &[(1, 1), (2, 2), (3, 3), (4, 3), (5, 3)]).unwrap();
        let b = extract_boundary(&m).unwrap();
        assert_eq!(b, m);
        assert_eq!(extract_boundary(&b).unwrap(), b);
    }
}
