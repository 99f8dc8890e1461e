//! Domain types shared by every stage of the pipeline.
//!
//! Image coordinates follow the raster convention: `u` grows rightward and
//! `v` grows downward. "Clockwise" everywhere in this crate means clockwise
//! as seen on screen in that frame.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A real-valued pixel coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pixel2 {
    pub u: f64,
    pub v: f64,
}

impl Pixel2 {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    pub fn dist2(&self, other: &Pixel2) -> f64 {
        let du = self.u - other.u;
        let dv = self.v - other.v;
        du * du + dv * dv
    }

    pub fn dist(&self, other: &Pixel2) -> f64 {
        self.dist2(other).sqrt()
    }
}

impl From<(f64, f64)> for Pixel2 {
    fn from((u, v): (f64, f64)) -> Self {
        Self { u, v }
    }
}

/// The raw foreground pixels of an object: at least one finite point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Pixel2>,
}

impl PointSet {
    pub fn new(points: Vec<Pixel2>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyMask);
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "non-finite point ({}, {})",
                p.u, p.v
            )));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Pixel2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Pixel2> {
        self.points
    }
}

/// Which output structure to extract, and how many points it has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeConfig {
    Centerline(usize),
    Contour(usize),
    Surface { rows: usize, cols: usize },
}

impl ShapeConfig {
    pub fn surface(rows: usize, cols: usize) -> Self {
        ShapeConfig::Surface { rows, cols }
    }

    /// Total number of shape points.
    pub fn n(&self) -> usize {
        match *self {
            ShapeConfig::Centerline(n) | ShapeConfig::Contour(n) => n,
            ShapeConfig::Surface { rows, cols } => rows * cols,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ShapeConfig::Centerline(_) => "centerline",
            ShapeConfig::Contour(_) => "contour",
            ShapeConfig::Surface { .. } => "surface",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ShapeConfig::Centerline(n) | ShapeConfig::Contour(n) if n < 2 => Err(
                Error::InvalidParams(format!("{} needs at least 2 points, got {n}", self.kind())),
            ),
            ShapeConfig::Surface { rows, cols } if rows < 2 || cols < 2 => Err(
                Error::InvalidParams(format!("surface grid must be at least 2x2, got {rows}x{cols}")),
            ),
            _ => Ok(()),
        }
    }

    /// The SOM lattice that matches this configuration.
    pub fn topology(&self) -> SomTopology {
        match *self {
            ShapeConfig::Centerline(n) => SomTopology::Chain(n),
            ShapeConfig::Contour(n) => SomTopology::Ring(n),
            ShapeConfig::Surface { rows, cols } => SomTopology::Grid { rows, cols },
        }
    }
}

impl fmt::Display for ShapeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeConfig::Centerline(n) => write!(f, "centerline:{n}"),
            ShapeConfig::Contour(n) => write!(f, "contour:{n}"),
            ShapeConfig::Surface { rows, cols } => write!(f, "surface:{rows}x{cols}"),
        }
    }
}

impl FromStr for ShapeConfig {
    type Err = Error;

    /// Parses `centerline:20`, `contour:32` or `surface:4x8`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid shape config `{s}`"));
        let (kind, count) = s.trim().split_once(':').ok_or_else(bad)?;
        let cfg = match kind {
            "centerline" => ShapeConfig::Centerline(count.parse().map_err(|_| bad())?),
            "contour" => ShapeConfig::Contour(count.parse().map_err(|_| bad())?),
            "surface" => {
                let (r, c) = count.split_once('x').ok_or_else(bad)?;
                ShapeConfig::Surface {
                    rows: r.parse().map_err(|_| bad())?,
                    cols: c.parse().map_err(|_| bad())?,
                }
            }
            _ => return Err(bad()),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// SOM lattice. Unit `i` of a grid sits at row `i / cols`, column `i % cols`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SomTopology {
    Chain(usize),
    Ring(usize),
    Grid { rows: usize, cols: usize },
}

impl SomTopology {
    pub fn len(&self) -> usize {
        match *self {
            SomTopology::Chain(n) | SomTopology::Ring(n) => n,
            SomTopology::Grid { rows, cols } => rows * cols,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SomTopology::Chain(n) | SomTopology::Ring(n) if n < 2 => {
                Err(Error::InvalidParams(format!("lattice needs at least 2 units, got {n}")))
            }
            SomTopology::Grid { rows, cols } if rows < 2 || cols < 2 => Err(Error::InvalidParams(
                format!("grid lattice must be at least 2x2, got {rows}x{cols}"),
            )),
            _ => Ok(()),
        }
    }

    /// Graph distance between two units on the lattice.
    pub fn lattice_distance(&self, a: usize, b: usize) -> usize {
        match *self {
            SomTopology::Chain(_) => a.abs_diff(b),
            SomTopology::Ring(n) => {
                let d = a.abs_diff(b);
                d.min(n - d)
            }
            SomTopology::Grid { cols, .. } => {
                (a / cols).abs_diff(b / cols) + (a % cols).abs_diff(b % cols)
            }
        }
    }

    /// Largest graph distance between any two units.
    pub fn diameter(&self) -> usize {
        match *self {
            SomTopology::Chain(n) => n - 1,
            SomTopology::Ring(n) => n / 2,
            SomTopology::Grid { rows, cols } => rows + cols - 2,
        }
    }
}

/// Exactly N cluster centres extracted from a [`PointSet`].
///
/// `lattice` is set when the points are listed in the unit order of a SOM
/// lattice, which lets the sorters reuse that adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct Centroids {
    points: Vec<Pixel2>,
    config: ShapeConfig,
    lattice: Option<SomTopology>,
}

impl Centroids {
    pub fn new(points: Vec<Pixel2>, config: ShapeConfig) -> Result<Self> {
        config.validate()?;
        if points.len() != config.n() {
            return Err(Error::InvalidParams(format!(
                "{config} expects {} centroids, got {}",
                config.n(),
                points.len()
            )));
        }
        Ok(Self { points, config, lattice: None })
    }

    /// Marks the points as listed in the unit order of `lattice`.
    pub fn with_lattice(mut self, lattice: SomTopology) -> Result<Self> {
        if lattice.len() != self.points.len() {
            return Err(Error::InvalidParams(format!(
                "lattice has {} units but there are {} centroids",
                lattice.len(),
                self.points.len()
            )));
        }
        self.lattice = Some(lattice);
        Ok(self)
    }

    pub fn points(&self) -> &[Pixel2] {
        &self.points
    }

    pub fn config(&self) -> ShapeConfig {
        self.config
    }

    pub fn lattice(&self) -> Option<SomTopology> {
        self.lattice
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Centroids in the configuration's canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedShape2D {
    points: Vec<Pixel2>,
    config: ShapeConfig,
    lattice: Option<SomTopology>,
}

impl OrderedShape2D {
    pub(crate) fn from_parts(
        points: Vec<Pixel2>,
        config: ShapeConfig,
        lattice: Option<SomTopology>,
    ) -> Self {
        Self { points, config, lattice }
    }

    pub fn points(&self) -> &[Pixel2] {
        &self.points
    }

    pub fn config(&self) -> ShapeConfig {
        self.config
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether consecutive points wrap around (last connects to first).
    pub fn is_closed(&self) -> bool {
        matches!(self.config, ShapeConfig::Contour(_))
    }

    /// Turns the ordered shape back into centroids, e.g. to re-sort it.
    pub fn into_centroids(self) -> Centroids {
        Centroids { points: self.points, config: self.config, lattice: self.lattice }
    }
}

/// A camera-frame point in millimetres (x right, y down, z forward).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// The 3D shape, index-aligned with the 2D shape it was lifted from.
#[derive(Debug, Clone, PartialEq)]
pub struct Shape3D {
    points: Vec<Point3>,
    source: OrderedShape2D,
}

impl Shape3D {
    /// Pairs 3D points with the 2D shape they belong to, index by index.
    pub fn new(points: Vec<Point3>, source: OrderedShape2D) -> Result<Self> {
        if points.len() != source.len() {
            return Err(Error::LengthMismatch { shape: source.len(), lifted: points.len() });
        }
        Ok(Self { points, source })
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn source(&self) -> &OrderedShape2D {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Clustering backend. `ALL` lists them in report row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Gmm,
    Fcm,
    Kma,
    Som,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Gmm, Method::Fcm, Method::Kma, Method::Som];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Gmm => "GMM",
            Method::Fcm => "FCM",
            Method::Kma => "KMA",
            Method::Som => "SOM",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "som" => Ok(Method::Som),
            "kma" | "kmeans" => Ok(Method::Kma),
            "fcm" => Ok(Method::Fcm),
            "gmm" => Ok(Method::Gmm),
            other => Err(Error::Parse(format!("unknown method `{other}`"))),
        }
    }
}

/// SOM training schedule. Learning rate and neighbourhood radius decay
/// exponentially from their initial to their final values over the epochs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SomParams {
    pub learning_rate: f64,
    pub final_learning_rate: f64,
    /// Initial Gaussian neighbourhood radius in lattice units; `None` means N/4.
    pub radius: Option<f64>,
    pub final_radius: f64,
    /// Fraction of a random data point blended into each initial weight.
    pub init_jitter: f64,
}

impl Default for SomParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            final_learning_rate: 0.01,
            radius: None,
            final_radius: 0.3,
            init_jitter: 0.02,
        }
    }
}

/// Hyperparameters for one clustering run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterParams {
    pub method: Method,
    pub seed: u64,
    /// Epochs (SOM) or iterations (everything else).
    pub max_iters: usize,
    /// Convergence threshold: pixels for SOM/KMA, membership change for
    /// FCM, log-likelihood gain for GMM.
    pub tol: f64,
    pub som: SomParams,
    /// FCM fuzzifier `m`.
    pub fuzzifier: f64,
    /// GMM variance floor.
    pub covariance_floor: f64,
    /// KMA restarts; the lowest-inertia run wins.
    pub restarts: usize,
}

impl ClusterParams {
    /// Default budgets for `method`.
    pub fn defaults(method: Method) -> Self {
        let max_iters = match method {
            Method::Som => 30,
            Method::Kma => 100,
            Method::Fcm => 150,
            Method::Gmm => 200,
        };
        Self {
            method,
            seed: 0,
            max_iters,
            tol: 1e-4,
            som: SomParams::default(),
            fuzzifier: 2.0,
            covariance_floor: 1e-4,
            restarts: 4,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParams(msg));
        if self.max_iters < 1 {
            return fail("max_iters must be at least 1".into());
        }
        if !(self.tol > 0.0) {
            return fail(format!("tol must be positive, got {}", self.tol));
        }
        if !(self.fuzzifier > 1.0) {
            return fail(format!("fuzzifier must exceed 1, got {}", self.fuzzifier));
        }
        if !(self.covariance_floor > 0.0) {
            return fail(format!("covariance floor must be positive, got {}", self.covariance_floor));
        }
        if self.restarts < 1 {
            return fail("restarts must be at least 1".into());
        }
        let som = &self.som;
        if !(som.learning_rate > 0.0 && som.learning_rate <= 1.0)
            || !(som.final_learning_rate > 0.0 && som.final_learning_rate <= som.learning_rate)
        {
            return fail("SOM learning rates must satisfy 0 < final <= initial <= 1".into());
        }
        if som.radius.is_some_and(|r| !(r > 0.0)) || !(som.final_radius > 0.0) {
            return fail("SOM radii must be positive".into());
        }
        if !(0.0..=1.0).contains(&som.init_jitter) {
            return fail("SOM init jitter must lie in [0, 1]".into());
        }
        Ok(())
    }
}

/// Scores for one detection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub sc: f64,
    /// `f64::INFINITY` when the within-cluster scatter is zero.
    pub ch: f64,
    pub time_s: f64,
    pub coverage_px: f64,
    pub spacing_cv: f64,
    /// Point cap applied to the silhouette computation, if any.
    pub sc_sample_cap: Option<usize>,
}
