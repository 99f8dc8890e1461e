//! Seeded synthetic dataset generator.
//!
//! - centerline: a cubic Bézier stroke, 8 to 16 px wide with flat ends,
//!   whose end points are 60 to 65% of the larger image side apart and whose
//!   length stays under 70% of it
//! - contour: a star-shaped blob with a few low-order harmonics
//! - surface: a rotated, perturbed quadrilateral with slightly bowed edges
//!
//! Depth is a tilted plane in millimetres with isolated single-pixel holes
//! (value 0) covering under 1% of the object. Sample `i` is generated from
//! `mix(seed, i)` alone, so output is byte-identical for a given seed.

use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng as _;
use rayon::prelude::*;

use super::manifest::{write_manifest, Manifest, SampleEntry, SampleSource, MANIFEST_FILE};
use super::pnm::{encode_depth, encode_mask};
use crate::error::{Error, Result};
use crate::geometry::polyline_length;
use crate::imaging::BinaryMask;
use crate::lift::DepthFrame;
use crate::rng::{self, Rng};
use crate::types::{Pixel2, ShapeConfig};

pub const DEFAULT_WIDTH: usize = 640;
pub const DEFAULT_HEIGHT: usize = 360;

const MAX_ATTEMPTS: usize = 10_000;
const CURVE_SAMPLES: usize = 256;
/// Upper bound on centre-line length as a fraction of the larger image side.
const MAX_CURVE_LENGTH: f64 = 0.7;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSample {
    pub mask: BinaryMask,
    pub depth: DepthFrame,
    /// Centre line (centerline) or closed outline (contour, surface).
    pub truth: Vec<Pixel2>,
    pub stroke_width: Option<f64>,
    /// Pixels whose depth was zeroed.
    pub holes: Vec<(usize, usize)>,
}

pub fn synth_sample(config: ShapeConfig, width: usize, height: usize, seed: u64) -> Result<SyntheticSample> {
    config.validate()?;
    if width < 64 || height < 64 {
        return Err(Error::InvalidParams(format!("synthetic frames must be at least 64x64, got {width}x{height}")));
    }
    let mut rng = rng::seeded(seed);
    let (w, h) = (width as f64, height as f64);
    let (mask, truth, stroke_width) = match config {
        ShapeConfig::Centerline(_) => {
            let (curve, stroke) = bezier_stroke(&mut rng, w, h)?;
            (stroke_mask(&curve, stroke / 2.0, width, height)?, curve, Some(stroke))
        }
        ShapeConfig::Contour(_) => {
            let outline = blob(&mut rng, w, h)?;
            (fill_polygon(&outline, width, height)?, outline, None)
        }
        ShapeConfig::Surface { .. } => {
            let outline = quad(&mut rng, w, h)?;
            (fill_polygon(&outline, width, height)?, outline, None)
        }
    };
    let (depth, holes) = depth_plane(&mut rng, &mask)?;
    Ok(SyntheticSample { mask, depth, truth, stroke_width, holes })
}

fn inside(points: &[Pixel2], w: f64, h: f64, margin: f64) -> bool {
    points.iter().all(|p| p.u >= margin && p.v >= margin && p.u <= w - 1.0 - margin && p.v <= h - 1.0 - margin)
}

fn bezier(p: [Pixel2; 4], t: f64) -> Pixel2 {
    let s = 1.0 - t;
    let (a, b, c, d) = (s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t);
    Pixel2::new(
        a * p[0].u + b * p[1].u + c * p[2].u + d * p[3].u,
        a * p[0].v + b * p[1].v + c * p[2].v + d * p[3].v,
    )
}

fn bezier_stroke(rng: &mut Rng, w: f64, h: f64) -> Result<(Vec<Pixel2>, f64)> {
    let extent = w.max(h);
    for _ in 0..MAX_ATTEMPTS {
        let stroke = rng.gen_range(8.0..=16.0);
        let chord = extent * rng.gen_range(0.6..0.65);
        let mut phi = rng.gen_range(-0.6..0.6);
        if w < h {
            phi += PI / 2.0;
        }
        if rng.gen_bool(0.5) {
            phi += PI;
        }
        let (d, n) = ((phi.cos(), phi.sin()), (-phi.sin(), phi.cos()));
        let c = Pixel2::new(rng.gen_range(0.3 * w..0.7 * w), rng.gen_range(0.3 * h..0.7 * h));
        let at = |along: f64, across: f64| Pixel2::new(c.u + along * d.0 + across * n.0, c.v + along * d.1 + across * n.1);
        let half = chord / 2.0;
        let p0 = at(-half, 0.0);
        let p3 = at(half, 0.0);
        let p1 = at(-half + chord * rng.gen_range(0.2..0.45), chord * rng.gen_range(-0.3..0.3));
        let p2 = at(half - chord * rng.gen_range(0.2..0.45), chord * rng.gen_range(-0.3..0.3));
        let curve: Vec<Pixel2> =
            (0..CURVE_SAMPLES).map(|i| bezier([p0, p1, p2, p3], i as f64 / (CURVE_SAMPLES - 1) as f64)).collect();
        if polyline_length(&curve) > MAX_CURVE_LENGTH * extent || !inside(&curve, w, h, stroke) {
            continue;
        }
        if self_approaches(&curve, stroke) {
            continue;
        }
        return Ok((curve, stroke));
    }
    Err(Error::InvalidParams("frame too small for a synthetic stroke".into()))
}

/// True if two parts of the curve that are more than `2·stroke` apart along
/// the curve come within `1.8·stroke` of each other.
fn self_approaches(curve: &[Pixel2], stroke: f64) -> bool {
    let mut arc = vec![0.0; curve.len()];
    for i in 1..curve.len() {
        arc[i] = arc[i - 1] + curve[i - 1].dist(&curve[i]);
    }
    let limit = (1.8 * stroke).powi(2);
    (0..curve.len()).any(|i| {
        (i + 1..curve.len()).any(|j| arc[j] - arc[i] >= 2.0 * stroke && curve[i].dist2(&curve[j]) < limit)
    })
}

/// Unclamped projection parameter of `p` onto the line through `a`, `b`.
fn seg_param(p: Pixel2, a: Pixel2, b: Pixel2) -> f64 {
    let (dx, dy) = (b.u - a.u, b.v - a.v);
    let l2 = dx * dx + dy * dy;
    if l2 > 0.0 {
        ((p.u - a.u) * dx + (p.v - a.v) * dy) / l2
    } else {
        0.0
    }
}

fn seg_dist2(p: Pixel2, a: Pixel2, b: Pixel2) -> f64 {
    let t = seg_param(p, a, b).clamp(0.0, 1.0);
    p.dist2(&Pixel2::new(a.u + t * (b.u - a.u), a.v + t * (b.v - a.v)))
}

/// Pixels whose centre lies within `radius` of the polyline, cut flat at
/// both ends.
fn stroke_mask(curve: &[Pixel2], radius: f64, width: usize, height: usize) -> Result<BinaryMask> {
    let mut mask = BinaryMask::new(width, height)?;
    let r2 = radius * radius;
    let last = curve.len() - 2;
    for (i, seg) in curve.windows(2).enumerate() {
        let (a, b) = (seg[0], seg[1]);
        let u0 = (a.u.min(b.u) - radius).floor().max(0.0) as usize;
        let u1 = ((a.u.max(b.u) + radius).ceil() as usize).min(width - 1);
        let v0 = (a.v.min(b.v) - radius).floor().max(0.0) as usize;
        let v1 = ((a.v.max(b.v) + radius).ceil() as usize).min(height - 1);
        for v in v0..=v1 {
            for u in u0..=u1 {
                let p = Pixel2::new(u as f64, v as f64);
                let t = seg_param(p, a, b);
                if (i == 0 && t < 0.0) || (i == last && t > 1.0) {
                    continue;
                }
                if seg_dist2(p, a, b) <= r2 {
                    mask.set(u, v, true);
                }
            }
        }
    }
    Ok(mask)
}

/// Even-odd scanline fill of pixel centres inside a closed polygon.
fn fill_polygon(poly: &[Pixel2], width: usize, height: usize) -> Result<BinaryMask> {
    let mut mask = BinaryMask::new(width, height)?;
    let mut xs = Vec::new();
    for v in 0..height {
        let y = v as f64;
        xs.clear();
        for i in 0..poly.len() {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            if (a.v <= y) != (b.v <= y) {
                xs.push(a.u + (y - a.v) / (b.v - a.v) * (b.u - a.u));
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            let lo = pair[0].ceil().max(0.0) as usize;
            let hi = pair[1].floor().min(width as f64 - 1.0);
            if hi < 0.0 {
                continue;
            }
            for u in lo..=hi as usize {
                mask.set(u, v, true);
            }
        }
    }
    Ok(mask)
}

fn blob(rng: &mut Rng, w: f64, h: f64) -> Result<Vec<Pixel2>> {
    for _ in 0..MAX_ATTEMPTS {
        let c = Pixel2::new(w / 2.0 + rng.gen_range(-0.1..0.1) * w, h / 2.0 + rng.gen_range(-0.1..0.1) * h);
        let r0 = rng.gen_range(0.22..0.34) * h;
        let stretch = rng.gen_range(1.0..1.5);
        let harmonics: Vec<(f64, f64, f64)> =
            (2..=4).map(|k| (k as f64, rng.gen_range(0.0..0.07), rng.gen_range(0.0..TAU))).collect();
        let outline: Vec<Pixel2> = (0..360)
            .map(|i| {
                let t = TAU * i as f64 / 360.0;
                let r = r0 * (1.0 + harmonics.iter().map(|&(k, a, ph)| a * (k * t + ph).cos()).sum::<f64>());
                Pixel2::new(c.u + stretch * r * t.cos(), c.v + r * t.sin())
            })
            .collect();
        if inside(&outline, w, h, 2.0) {
            return Ok(outline);
        }
    }
    Err(Error::InvalidParams("frame too small for a synthetic blob".into()))
}

fn quad(rng: &mut Rng, w: f64, h: f64) -> Result<Vec<Pixel2>> {
    for _ in 0..MAX_ATTEMPTS {
        let c = Pixel2::new(w / 2.0 + rng.gen_range(-0.08..0.08) * w, h / 2.0 + rng.gen_range(-0.08..0.08) * h);
        let (a, b) = (rng.gen_range(0.18..0.3) * w, rng.gen_range(0.25..0.38) * h);
        let rot: f64 = rng.gen_range(-0.3..0.3);
        let corners: Vec<Pixel2> = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
            .iter()
            .map(|&(su, sv)| {
                let x = su * a * (1.0 + rng.gen_range(-0.08..0.08));
                let y = sv * b * (1.0 + rng.gen_range(-0.08..0.08));
                Pixel2::new(c.u + x * rot.cos() - y * rot.sin(), c.v + x * rot.sin() + y * rot.cos())
            })
            .collect();
        let mut outline = Vec::with_capacity(4 * 64);
        for i in 0..4 {
            let (p, q) = (corners[i], corners[(i + 1) % 4]);
            let len = p.dist(&q);
            let bow = rng.gen_range(-0.03..0.03) * len;
            let normal = ((q.v - p.v) / len, -(q.u - p.u) / len);
            for s in 0..64 {
                let t = s as f64 / 64.0;
                let off = bow * (PI * t).sin();
                outline.push(Pixel2::new(p.u + t * (q.u - p.u) + off * normal.0, p.v + t * (q.v - p.v) + off * normal.1));
            }
        }
        if inside(&outline, w, h, 2.0) {
            return Ok(outline);
        }
    }
    Err(Error::InvalidParams("frame too small for a synthetic quadrilateral".into()))
}

fn depth_plane(rng: &mut Rng, mask: &BinaryMask) -> Result<(DepthFrame, Vec<(usize, usize)>)> {
    let (width, height) = (mask.width(), mask.height());
    let z0 = rng.gen_range(600.0..1200.0);
    let (gu, gv) = (rng.gen_range(-0.25..0.25), rng.gen_range(-0.25..0.25));
    let mut data = Vec::with_capacity(width * height);
    for v in 0..height {
        for u in 0..width {
            let z: f64 = z0 + gu * (u as f64 - width as f64 / 2.0) + gv * (v as f64 - height as f64 / 2.0);
            data.push(z.round().clamp(1.0, 65535.0) as u16);
        }
    }
    let mut depth = DepthFrame::new(width, height, data)?;

    let object: Vec<(usize, usize)> =
        (0..height).flat_map(|v| (0..width).map(move |u| (u, v))).filter(|&(u, v)| mask.get(u, v)).collect();
    let wanted = (object.len() as f64 * rng.gen_range(0.002..0.008)) as usize;
    let mut holes = Vec::with_capacity(wanted);
    for _ in 0..wanted * 20 {
        if holes.len() == wanted {
            break;
        }
        let (u, v) = object[rng.gen_range(0..object.len())];
        // keep holes isolated so every one has valid 8-neighbours
        let crowded = holes.iter().any(|&(hu, hv): &(usize, usize)| hu.abs_diff(u) <= 1 && hv.abs_diff(v) <= 1);
        if !crowded && u > 0 && v > 0 && u + 1 < width && v + 1 < height {
            depth.set(u, v, 0);
            holes.push((u, v));
        }
    }
    holes.sort_by_key(|&(u, v)| (v, u));
    Ok((depth, holes))
}

/// Generates `count` samples into `out_dir` (masks/, depth/ and
/// manifest.txt) and returns the manifest.
pub fn gen_synthetic(
    config: ShapeConfig,
    count: usize,
    seed: u64,
    width: usize,
    height: usize,
    out_dir: impl AsRef<Path>,
) -> Result<Manifest> {
    let out = out_dir.as_ref();
    let samples: Vec<SyntheticSample> = (0..count)
        .into_par_iter()
        .map(|i| synth_sample(config, width, height, rng::mix(seed, i as u64)))
        .collect::<Result<_>>()?;
    for dir in ["masks", "depth"] {
        let d = out.join(dir);
        fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
    }
    let mut entries = Vec::with_capacity(count);
    for (i, s) in samples.iter().enumerate() {
        let id = format!("{i:04}");
        let mask_rel = PathBuf::from("masks").join(format!("{id}.pgm"));
        let depth_rel = PathBuf::from("depth").join(format!("{id}.pgm"));
        write_bytes(&out.join(&mask_rel), &encode_mask(&s.mask))?;
        write_bytes(&out.join(&depth_rel), &encode_depth(&s.depth))?;
        entries.push(SampleEntry {
            id,
            source: SampleSource::Mask(mask_rel),
            depth: Some(depth_rel),
            roi: None,
            stroke_width: s.stroke_width,
            truth: s.truth.clone(),
        });
    }
    let manifest = Manifest { config, width, height, seed: Some(seed), samples: entries, root: out.to_path_buf() };
    write_manifest(&manifest, out.join(MANIFEST_FILE))?;
    Ok(manifest)
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
