//! Dataset benchmark: every method on every sample, averaged per method.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::clustering::assign_labels;
use crate::error::{Error, Result};
use crate::io::{Manifest, SampleImage};
use crate::metrics::{calinski_harabasz, coverage_radius, silhouette_capped, spacing_cv, DEFAULT_SC_CAP};
use crate::ordering;
use crate::pipeline::{clustering_input, object_mask, timed_fit, Clock, InputImage, Segmentation};
use crate::rng::mix;
use crate::types::{ClusterParams, MetricsReport, Method, PointSet, ShapeConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub methods: Vec<Method>,
    pub seed: u64,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    /// Silhouette point cap; 0 disables subsampling.
    pub sc_cap: usize,
}

impl BenchOptions {
    pub fn new(methods: Vec<Method>, seed: u64) -> Self {
        Self { methods, seed, jobs: 0, sc_cap: DEFAULT_SC_CAP }
    }
}

/// Outcome of one method on one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub index: usize,
    pub sample: String,
    pub method: Method,
    pub outcome: std::result::Result<MetricsReport, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub method: Method,
    pub sc: f64,
    pub ch: f64,
    pub time_s: f64,
    /// Samples that contributed to the means.
    pub samples: usize,
    pub failures: usize,
}

/// Per-method means in fixed GMM, FCM, KMA, SOM row order.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    pub config: ShapeConfig,
    pub samples: usize,
    pub rows: Vec<BenchRow>,
}

impl BenchTable {
    pub fn row(&self, method: Method) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.method == method)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().map(|r| r.failures).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,sc,ch,time_s\n");
        for r in &self.rows {
            writeln!(out, "{},{:.6},{:.6},{:.6}", r.method.name(), r.sc, r.ch, r.time_s).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub table: BenchTable,
    pub records: Vec<SampleRecord>,
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Aggregates records into the table. Failed records are excluded.
pub fn tabulate(config: ShapeConfig, samples: usize, methods: &[Method], records: &[SampleRecord]) -> BenchTable {
    let rows = Method::ALL
        .iter()
        .filter(|m| methods.contains(m))
        .map(|&method| {
            let ok: Vec<&MetricsReport> =
                records.iter().filter(|r| r.method == method).filter_map(|r| r.outcome.as_ref().ok()).collect();
            let failures = records.iter().filter(|r| r.method == method && r.outcome.is_err()).count();
            BenchRow {
                method,
                sc: mean(ok.iter().map(|m| m.sc)),
                ch: mean(ok.iter().map(|m| m.ch)),
                time_s: mean(ok.iter().map(|m| m.time_s)),
                samples: ok.len(),
                failures,
            }
        })
        .collect();
    BenchTable { config, samples, rows }
}

/// Clustering input for one sample. Masks are used as given; RGB samples go
/// through segmentation first.
pub fn sample_points(manifest: &Manifest, index: usize) -> Result<PointSet> {
    let entry = &manifest.samples[index];
    let wrap = |e| Error::Dataset { sample: entry.id.clone(), source: Box::new(e) };
    let object = match manifest.load_input(entry)? {
        SampleImage::Mask(m) => match entry.roi {
            Some(roi) => crate::imaging::crop_mask(&m, roi).map_err(wrap)?,
            None => m,
        },
        SampleImage::Rgb(img, hsv) => {
            let seg = Segmentation { roi: entry.roi, hsv: Some(hsv), ..Segmentation::default() };
            object_mask(&InputImage::Rgb(img), &seg).map_err(wrap)?
        }
    };
    clustering_input(&object, manifest.config).map_err(wrap)
}

/// Fit, label and score one method on one sample's points. Only the fit is
/// timed.
pub fn evaluate(
    points: &PointSet,
    config: ShapeConfig,
    params: &ClusterParams,
    sc_cap: usize,
    clock: &impl Clock,
) -> Result<MetricsReport> {
    let (centroids, time_s) = timed_fit(points, config, params, clock)?;
    let labels = assign_labels(points, &centroids);
    let sc = silhouette_capped(points, &labels, sc_cap, mix(params.seed, 1))?;
    let ch = calinski_harabasz(points, &labels)?;
    let coverage_px = coverage_radius(points, &centroids);
    let spacing = ordering::sort(&centroids).and_then(|s| spacing_cv(&s)).unwrap_or(f64::NAN);
    Ok(MetricsReport {
        sc,
        ch,
        time_s,
        coverage_px,
        spacing_cv: spacing,
        sc_sample_cap: (sc_cap > 0 && points.len() > sc_cap).then_some(sc_cap),
    })
}

/// Runs every (sample, method) pair on a pool of `opts.jobs` workers.
/// Sample `i` uses seed `mix(opts.seed, i)` for every method, and records
/// come back in (sample, method) order whatever the scheduling.
pub fn run_bench(manifest: &Manifest, opts: &BenchOptions, clock: &impl Clock) -> Result<BenchReport> {
    if opts.methods.is_empty() {
        return Err(Error::Usage("no methods selected".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::InvalidParams(format!("worker pool: {e}")))?;
    let config = manifest.config;
    let methods: Vec<Method> = Method::ALL.iter().copied().filter(|m| opts.methods.contains(m)).collect();

    pool.install(|| {
        let loaded: Vec<Result<PointSet>> =
            (0..manifest.samples.len()).into_par_iter().map(|i| sample_points(manifest, i)).collect();
        let points = loaded.into_iter().collect::<Result<Vec<_>>>()?;

        let jobs: Vec<(usize, Method)> =
            (0..points.len()).flat_map(|i| methods.iter().map(move |&m| (i, m))).collect();
        let records: Vec<SampleRecord> = jobs
            .par_iter()
            .map(|&(i, method)| {
                let params = ClusterParams::defaults(method).with_seed(mix(opts.seed, i as u64));
                SampleRecord {
                    index: i,
                    sample: manifest.samples[i].id.clone(),
                    method,
                    outcome: evaluate(&points[i], config, &params, opts.sc_cap, clock).map_err(|e| e.to_string()),
                }
            })
            .collect();
        let table = tabulate(config, points.len(), &methods, &records);
        Ok(BenchReport { table, records })
    })
}
