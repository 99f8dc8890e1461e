//! Small text formats: camera intrinsics and shape CSV.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lift::Intrinsics;
use crate::types::{OrderedShape2D, Pixel2, Point3, Shape3D};

/// Splits `key=value` lines, skipping blanks and `#` comments. Duplicate
/// keys are rejected.
pub(crate) fn key_values<'a>(lines: impl IntoIterator<Item = &'a str>) -> Result<BTreeMap<&'a str, &'a str>> {
    let mut out = BTreeMap::new();
    for (i, raw) in lines.into_iter().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key=value, got `{line}`", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if out.insert(k, v).is_some() {
            return Err(Error::Parse(format!("duplicate key `{k}`")));
        }
    }
    Ok(out)
}

pub(crate) fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse(format!("`{key}`: `{value}` is not a finite number")))
}

/// Parses `fx`, `fy`, `cx`, `cy` from `key=value` lines. Unknown keys are
/// rejected so that typos do not silently fall back to defaults.
pub fn parse_intrinsics(text: &str) -> Result<Intrinsics> {
    let kv = key_values(text.lines())?;
    if let Some(k) = kv.keys().find(|k| !["fx", "fy", "cx", "cy"].contains(k)) {
        return Err(Error::UnknownKey(k.to_string()));
    }
    let get = |k: &str| kv.get(k).ok_or_else(|| Error::MissingKey(k.into())).and_then(|v| parse_f64(k, v));
    Intrinsics::new(get("fx")?, get("fy")?, get("cx")?, get("cy")?)
}

pub fn read_intrinsics(path: impl AsRef<Path>) -> Result<Intrinsics> {
    let path = path.as_ref();
    parse_intrinsics(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

pub fn format_intrinsics(k: &Intrinsics) -> String {
    format!("fx={}\nfy={}\ncx={}\ncy={}\n", k.fx, k.fy, k.cx, k.cy)
}

/// Renders `index,u,v` rows, plus `x,y,z` columns when a lifted shape is
/// given. Values use six decimals.
pub fn format_shape_csv(shape: &OrderedShape2D, lifted: Option<&Shape3D>) -> Result<String> {
    if let Some(l) = lifted {
        if l.len() != shape.len() {
            return Err(Error::LengthMismatch { shape: shape.len(), lifted: l.len() });
        }
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let header: &[&str] = if lifted.is_some() { &["index", "u", "v", "x", "y", "z"] } else { &["index", "u", "v"] };
    let csv_err = |e: csv::Error| Error::Parse(format!("CSV: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for (i, p) in shape.points().iter().enumerate() {
        let mut row = vec![i.to_string(), format!("{:.6}", p.u), format!("{:.6}", p.v)];
        if let Some(l) = lifted {
            let q = l.points()[i];
            row.extend([q.x, q.y, q.z].map(|c| format!("{c:.6}")));
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(format!("CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV output is ASCII"))
}

pub fn write_shape_csv(shape: &OrderedShape2D, lifted: Option<&Shape3D>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = format_shape_csv(shape, lifted)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Rows of a shape CSV as read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeTable {
    pub points: Vec<Pixel2>,
    pub lifted: Option<Vec<Point3>>,
}

pub fn parse_shape_csv(text: &str) -> Result<ShapeTable> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
    let csv_err = |e: csv::Error| Error::Parse(format!("CSV: {e}"));
    let header = reader.headers().map_err(csv_err)?;
    let lifted = match header.iter().collect::<Vec<_>>()[..] {
        ["index", "u", "v"] => false,
        ["index", "u", "v", "x", "y", "z"] => true,
        [] => return Err(Error::Parse("empty CSV".into())),
        _ => return Err(Error::Parse(format!("unexpected CSV header `{}`", header.iter().collect::<Vec<_>>().join(",")))),
    };
    let width = if lifted { 6 } else { 3 };
    let mut points = Vec::new();
    let mut xyz = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        if record.len() != width {
            return Err(Error::Parse(format!("row {row}: expected {width} columns, got {}", record.len())));
        }
        if record[0].parse::<usize>().ok() != Some(row) {
            return Err(Error::Parse(format!("row {row}: bad index `{}`", &record[0])));
        }
        let f: Vec<f64> = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(c, s)| parse_f64(&format!("row {row} column {}", c + 1), s))
            .collect::<Result<_>>()?;
        points.push(Pixel2::new(f[0], f[1]));
        if lifted {
            xyz.push(Point3 { x: f[2], y: f[3], z: f[4] });
        }
    }
    Ok(ShapeTable { points, lifted: lifted.then_some(xyz) })
}

pub fn read_shape_csv(path: impl AsRef<Path>) -> Result<ShapeTable> {
    let path = path.as_ref();
    parse_shape_csv(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}
