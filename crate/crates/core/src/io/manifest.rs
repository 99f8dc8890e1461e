//! Dataset manifest: plain `key=value` blocks separated by blank lines.
//!
//! The first block describes the dataset, every following block one sample:
//!
//! ```text
//! format=shapeclust-dataset-1
//! config=centerline:20
//! width=640
//! height=360
//! seed=42
//! count=2
//!
//! id=0000
//! mask=masks/0000.pgm
//! depth=depth/0000.pgm
//! stroke_width=11.500000
//! truth=120.0,80.5;130.2,82.0;...
//! ```
//!
//! A sample names either `mask=` or `image=` (with `hsv=`); `depth=`,
//! `roi=`, `stroke_width=` and `truth=` are optional. Paths are relative to
//! the manifest's directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::pnm::{read_pnm, PnmImage};
use super::text::{key_values, parse_f64};
use crate::error::{Error, Result};
use crate::imaging::{BinaryMask, HsvRange, RgbImage, RoiRect};
use crate::lift::DepthFrame;
use crate::types::{Pixel2, ShapeConfig};

pub const MANIFEST_FORMAT: &str = "shapeclust-dataset-1";
pub const MANIFEST_FILE: &str = "manifest.txt";

#[derive(Debug, Clone, PartialEq)]
pub enum SampleSource {
    Mask(PathBuf),
    Image { path: PathBuf, hsv: HsvRange },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleEntry {
    pub id: String,
    pub source: SampleSource,
    pub depth: Option<PathBuf>,
    pub roi: Option<RoiRect>,
    /// Stroke width in pixels (centerline datasets).
    pub stroke_width: Option<f64>,
    /// Generating curve: the centre line, or the closed outline.
    pub truth: Vec<Pixel2>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub config: ShapeConfig,
    pub width: usize,
    pub height: usize,
    pub seed: Option<u64>,
    pub samples: Vec<SampleEntry>,
    /// Directory that sample paths are relative to; not serialised.
    pub root: PathBuf,
}

/// Decoded sample input.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleImage {
    Mask(BinaryMask),
    Rgb(RgbImage, HsvRange),
}

impl Manifest {
    pub fn resolve(&self, relative: &Path) -> PathBuf {
        self.root.join(relative)
    }

    /// Reads and decodes a sample's input image, wrapping failures with the
    /// sample id.
    pub fn load_input(&self, sample: &SampleEntry) -> Result<SampleImage> {
        let wrap = |e| Error::Dataset { sample: sample.id.clone(), source: Box::new(e) };
        let (path, hsv) = match &sample.source {
            SampleSource::Mask(p) => (p, None),
            SampleSource::Image { path, hsv } => (path, Some(*hsv)),
        };
        match (read_pnm(self.resolve(path)).map_err(wrap)?, hsv) {
            (PnmImage::Mask(m), None) => Ok(SampleImage::Mask(m)),
            (PnmImage::Rgb(img), Some(hsv)) => Ok(SampleImage::Rgb(img, hsv)),
            (other, _) => Err(wrap(Error::UnsupportedVariant(format!(
                "{} where {} was expected",
                other.kind(),
                if hsv.is_some() { "an RGB image" } else { "a mask" }
            )))),
        }
    }

    pub fn load_depth(&self, sample: &SampleEntry) -> Result<Option<DepthFrame>> {
        let Some(path) = &sample.depth else { return Ok(None) };
        let wrap = |e| Error::Dataset { sample: sample.id.clone(), source: Box::new(e) };
        match read_pnm(self.resolve(path)).map_err(wrap)? {
            PnmImage::Depth(d) => Ok(Some(d)),
            other => Err(wrap(Error::UnsupportedVariant(format!("{} where a depth frame was expected", other.kind())))),
        }
    }

    /// Decodes every referenced file once.
    pub fn check_files(&self) -> Result<()> {
        for s in &self.samples {
            self.load_input(s)?;
            self.load_depth(s)?;
        }
        Ok(())
    }
}

fn format_points(points: &[Pixel2]) -> String {
    let mut out = String::new();
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        write!(out, "{:.3},{:.3}", p.u, p.v).unwrap();
    }
    out
}

fn parse_points(value: &str) -> Result<Vec<Pixel2>> {
    value
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (u, v) = pair.split_once(',').ok_or_else(|| Error::Parse(format!("bad truth point `{pair}`")))?;
            Ok(Pixel2::new(parse_f64("truth", u.trim())?, parse_f64("truth", v.trim())?))
        })
        .collect()
}

pub fn format_manifest(m: &Manifest) -> String {
    let mut out = String::new();
    writeln!(out, "format={MANIFEST_FORMAT}").unwrap();
    writeln!(out, "config={}", m.config).unwrap();
    writeln!(out, "width={}\nheight={}", m.width, m.height).unwrap();
    if let Some(seed) = m.seed {
        writeln!(out, "seed={seed}").unwrap();
    }
    writeln!(out, "count={}", m.samples.len()).unwrap();
    for s in &m.samples {
        writeln!(out, "\nid={}", s.id).unwrap();
        match &s.source {
            SampleSource::Mask(p) => writeln!(out, "mask={}", p.display()).unwrap(),
            SampleSource::Image { path, hsv } => writeln!(out, "image={}\nhsv={hsv}", path.display()).unwrap(),
        }
        if let Some(d) = &s.depth {
            writeln!(out, "depth={}", d.display()).unwrap();
        }
        if let Some(r) = &s.roi {
            writeln!(out, "roi={r}").unwrap();
        }
        if let Some(w) = s.stroke_width {
            writeln!(out, "stroke_width={w:.6}").unwrap();
        }
        if !s.truth.is_empty() {
            writeln!(out, "truth={}", format_points(&s.truth)).unwrap();
        }
    }
    out
}

fn blocks(text: &str) -> Vec<Vec<&str>> {
    let mut out = vec![];
    let mut cur = vec![];
    for line in text.lines() {
        if line.trim().is_empty() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(line);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse(format!("`{key}`: invalid value `{value}`")))
}

fn parse_sample(lines: Vec<&str>) -> Result<SampleEntry> {
    let kv = key_values(lines)?;
    const KEYS: [&str; 8] = ["id", "mask", "image", "hsv", "depth", "roi", "stroke_width", "truth"];
    if let Some(k) = kv.keys().find(|k| !KEYS.contains(k)) {
        return Err(Error::UnknownKey(k.to_string()));
    }
    let id = kv.get("id").ok_or_else(|| Error::MissingKey("id".into()))?.to_string();
    let wrap = |e| Error::Dataset { sample: id.clone(), source: Box::new(e) };
    let source = match (kv.get("mask"), kv.get("image"), kv.get("hsv")) {
        (Some(m), None, None) => SampleSource::Mask(m.into()),
        (None, Some(i), Some(h)) => SampleSource::Image { path: i.into(), hsv: h.parse().map_err(wrap)? },
        (None, Some(_), None) => return Err(wrap(Error::MissingKey("hsv".into()))),
        (None, None, _) => return Err(wrap(Error::MissingKey("mask".into()))),
        _ => return Err(wrap(Error::Parse("a sample names exactly one of `mask` or `image` (+`hsv`)".into()))),
    };
    Ok(SampleEntry {
        source,
        depth: kv.get("depth").map(PathBuf::from),
        roi: kv.get("roi").map(|r| r.parse()).transpose().map_err(wrap)?,
        stroke_width: kv.get("stroke_width").map(|w| parse_f64("stroke_width", w)).transpose().map_err(wrap)?,
        truth: kv.get("truth").map(|t| parse_points(t)).transpose().map_err(wrap)?.unwrap_or_default(),
        id,
    })
}

pub fn parse_manifest(text: &str, root: impl Into<PathBuf>) -> Result<Manifest> {
    let mut blocks = blocks(text).into_iter();
    let header = key_values(blocks.next().ok_or_else(|| Error::Parse("empty manifest".into()))?)?;
    if let Some(k) = header.keys().find(|k| !["format", "config", "width", "height", "seed", "count"].contains(k)) {
        return Err(Error::UnknownKey(k.to_string()));
    }
    let get = |k: &str| header.get(k).copied().ok_or_else(|| Error::MissingKey(k.into()));
    if get("format")? != MANIFEST_FORMAT {
        return Err(Error::Parse(format!("unsupported manifest format `{}`", get("format")?)));
    }
    let samples = blocks.map(parse_sample).collect::<Result<Vec<_>>>()?;
    let count: usize = number("count", get("count")?)?;
    if count != samples.len() {
        return Err(Error::Parse(format!("count={count} but {} sample blocks", samples.len())));
    }
    Ok(Manifest {
        config: get("config")?.parse()?,
        width: number("width", get("width")?)?,
        height: number("height", get("height")?)?,
        seed: header.get("seed").map(|s| number("seed", s)).transpose()?,
        samples,
        root: root.into(),
    })
}

/// Reads a manifest from a file, or from `manifest.txt` inside a directory,
/// and checks that every referenced file exists.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let mut path = path.as_ref().to_path_buf();
    if path.is_dir() {
        path.push(MANIFEST_FILE);
    }
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let m = parse_manifest(&text, root)?;
    for s in &m.samples {
        let input = match &s.source {
            SampleSource::Mask(p) | SampleSource::Image { path: p, .. } => p,
        };
        for p in std::iter::once(input).chain(&s.depth) {
            let full = m.resolve(p);
            if !full.is_file() {
                return Err(Error::Dataset {
                    sample: s.id.clone(),
                    source: Box::new(Error::io(full, std::io::ErrorKind::NotFound.into())),
                });
            }
        }
    }
    Ok(m)
}

pub fn write_manifest(m: &Manifest, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_manifest(m)).map_err(|e| Error::io(path, e))
}
