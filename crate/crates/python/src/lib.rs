//! Python bindings for `shapeclust`.
//!
//! Points cross the boundary as lists of `(u, v)` tuples. Input and parse
//! errors raise `ValueError`, file errors `OSError`, pipeline failures
//! `RuntimeError`.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use shapeclust::bench::{run_bench, BenchOptions};
use shapeclust::clustering::{self, Labels};
use shapeclust::io::{gen_synthetic, read_manifest, read_pnm};
use shapeclust::lift::{backproject, lift_shape, DEFAULT_SEARCH_RADIUS};
use shapeclust::metrics;
use shapeclust::ordering;
use shapeclust::pipeline::{detect, InputImage, Segmentation, WallClock, DEFAULT_MIN_AREA};
use shapeclust::{
    Centroids, ClusterParams, DepthFrame, Error, HsvRange, Intrinsics, Method, OrderedShape2D, Pixel2, PointSet,
    RoiRect, ShapeConfig,
};

fn py_err(e: Error) -> PyErr {
    match e.exit_code() {
        2 | 3 => PyValueError::new_err(e.to_string()),
        5 => PyOSError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn point_set(points: Vec<(f64, f64)>) -> PyResult<PointSet> {
    PointSet::new(points.into_iter().map(Pixel2::from).collect()).map_err(py_err)
}

fn tuples(points: &[Pixel2]) -> Vec<(f64, f64)> {
    points.iter().map(|p| (p.u, p.v)).collect()
}

fn labels_of(labels: Vec<usize>) -> PyResult<Labels> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    Labels::new(labels, k).map_err(py_err)
}

/// Output structure and point count, e.g. `ShapeConfig("surface:4x8")`.
#[pyclass(name = "ShapeConfig", module = "shapeclust", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyShapeConfig(ShapeConfig);

#[pymethods]
impl PyShapeConfig {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn centerline(n: usize) -> PyResult<Self> {
        let c = ShapeConfig::Centerline(n);
        c.validate().map_err(py_err)?;
        Ok(Self(c))
    }

    #[staticmethod]
    fn contour(n: usize) -> PyResult<Self> {
        let c = ShapeConfig::Contour(n);
        c.validate().map_err(py_err)?;
        Ok(Self(c))
    }

    #[staticmethod]
    fn surface(rows: usize, cols: usize) -> PyResult<Self> {
        let c = ShapeConfig::surface(rows, cols);
        c.validate().map_err(py_err)?;
        Ok(Self(c))
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ShapeConfig('{}')", self.0)
    }
}

/// Clustering settings; unspecified fields take the method's defaults.
#[pyclass(name = "ClusterParams", module = "shapeclust", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyClusterParams(ClusterParams);

#[pymethods]
impl PyClusterParams {
    #[new]
    #[pyo3(signature = (method = "som", seed = 0, max_iters = None, tol = None, restarts = None))]
    fn new(method: &str, seed: u64, max_iters: Option<usize>, tol: Option<f64>, restarts: Option<usize>) -> PyResult<Self> {
        let method: Method = method.parse().map_err(py_err)?;
        let mut p = ClusterParams::defaults(method).with_seed(seed);
        if let Some(it) = max_iters {
            p = p.with_max_iters(it);
        }
        if let Some(t) = tol {
            p.tol = t;
        }
        if let Some(r) = restarts {
            p = p.with_restarts(r);
        }
        p.validate().map_err(py_err)?;
        Ok(Self(p))
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.0.method.name()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    #[getter]
    fn max_iters(&self) -> usize {
        self.0.max_iters
    }

    fn __repr__(&self) -> String {
        format!("ClusterParams(method='{}', seed={}, max_iters={})", self.0.method.name(), self.0.seed, self.0.max_iters)
    }
}

fn params_or_default(params: Option<&PyClusterParams>) -> ClusterParams {
    params.map_or_else(|| ClusterParams::defaults(Method::Som), |p| p.0)
}

/// Pinhole camera intrinsics in pixels.
#[pyclass(name = "Intrinsics", module = "shapeclust", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyIntrinsics(Intrinsics);

#[pymethods]
impl PyIntrinsics {
    #[new]
    fn new(fx: f64, fy: f64, cx: f64, cy: f64) -> PyResult<Self> {
        Intrinsics::new(fx, fy, cx, cy).map(Self).map_err(py_err)
    }

    fn project(&self, x: f64, y: f64, z: f64) -> (f64, f64) {
        let p = self.0.project(&shapeclust::Point3 { x, y, z });
        (p.u, p.v)
    }
}

/// 16-bit depth raster in millimetres, 0 = missing.
#[pyclass(name = "DepthFrame", module = "shapeclust", frozen, skip_from_py_object)]
struct PyDepthFrame(DepthFrame);

#[pymethods]
impl PyDepthFrame {
    #[new]
    fn new(width: usize, height: usize, depth: Vec<u16>) -> PyResult<Self> {
        DepthFrame::new(width, height, depth).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        match read_pnm(path).map_err(py_err)? {
            shapeclust::io::PnmImage::Depth(d) => Ok(Self(d)),
            other => Err(PyValueError::new_err(format!("{path} holds a {}, not a depth frame", other.kind()))),
        }
    }

    #[getter]
    fn width(&self) -> usize {
        self.0.width()
    }

    #[getter]
    fn height(&self) -> usize {
        self.0.height()
    }
}

/// Ordered 2D shape points.
#[pyclass(name = "Shape", module = "shapeclust", frozen, skip_from_py_object)]
struct PyShape(OrderedShape2D);

#[pymethods]
impl PyShape {
    #[getter]
    fn points(&self) -> Vec<(f64, f64)> {
        tuples(self.0.points())
    }

    #[getter]
    fn config(&self) -> PyShapeConfig {
        PyShapeConfig(self.0.config())
    }

    #[getter]
    fn closed(&self) -> bool {
        self.0.is_closed()
    }

    fn spacing_cv(&self) -> PyResult<f64> {
        metrics::spacing_cv(&self.0).map_err(py_err)
    }

    /// Back-projects every point, returning `(x, y, z)` tuples in order.
    #[pyo3(signature = (depth, intrinsics, search_radius = DEFAULT_SEARCH_RADIUS))]
    fn lift(&self, depth: &PyDepthFrame, intrinsics: &PyIntrinsics, search_radius: f64) -> PyResult<Vec<(f64, f64, f64)>> {
        let s = lift_shape(&self.0, &depth.0, &intrinsics.0, search_radius).map_err(py_err)?;
        Ok(s.points().iter().map(|p| (p.x, p.y, p.z)).collect())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Shape('{}', {} points)", self.0.config(), self.0.len())
    }
}

/// Raw centroids in backend order (lattice order for the SOM).
#[pyfunction]
#[pyo3(signature = (points, config, params = None))]
fn fit(points: Vec<(f64, f64)>, config: &PyShapeConfig, params: Option<&PyClusterParams>) -> PyResult<Vec<(f64, f64)>> {
    let c = clustering::fit(&point_set(points)?, config.0, &params_or_default(params)).map_err(py_err)?;
    Ok(tuples(c.points()))
}

/// Fits and orders a shape from pixel coordinates.
#[pyfunction]
#[pyo3(signature = (points, config, params = None))]
fn detect_points(points: Vec<(f64, f64)>, config: &PyShapeConfig, params: Option<&PyClusterParams>) -> PyResult<PyShape> {
    let c = clustering::fit(&point_set(points)?, config.0, &params_or_default(params)).map_err(py_err)?;
    ordering::sort(&c).map(PyShape).map_err(py_err)
}

/// Full pipeline on a PNM file; returns the shape and the fit time.
#[pyfunction]
#[pyo3(signature = (path, config, params = None, roi = None, hsv = None, min_area = DEFAULT_MIN_AREA))]
fn detect_file(
    path: &str,
    config: &PyShapeConfig,
    params: Option<&PyClusterParams>,
    roi: Option<(usize, usize, usize, usize)>,
    hsv: Option<(f64, f64, f64, f64, f64, f64)>,
    min_area: usize,
) -> PyResult<(PyShape, f64)> {
    let input = InputImage::try_from(read_pnm(path).map_err(py_err)?).map_err(py_err)?;
    let hsv = hsv.map(|h| HsvRange::new(h.0, h.1, h.2, h.3, h.4, h.5)).transpose().map_err(py_err)?;
    let seg = Segmentation { roi: roi.map(|r| RoiRect::new(r.0, r.1, r.2, r.3)), hsv, min_area };
    let d = detect(&input, &seg, config.0, &params_or_default(params), &WallClock).map_err(py_err)?;
    Ok((PyShape(d.shape), d.fit_time_s))
}

/// Orders raw centroids for a configuration.
#[pyfunction]
fn sort(centroids: Vec<(f64, f64)>, config: &PyShapeConfig) -> PyResult<PyShape> {
    let c = Centroids::new(centroids.into_iter().map(Pixel2::from).collect(), config.0).map_err(py_err)?;
    ordering::sort(&c).map(PyShape).map_err(py_err)
}

#[pyfunction]
fn assign_labels(points: Vec<(f64, f64)>, centroids: Vec<(f64, f64)>) -> PyResult<Vec<usize>> {
    let data = point_set(points)?;
    let n = centroids.len();
    let cfg = ShapeConfig::Centerline(n);
    let c = Centroids::new(centroids.into_iter().map(Pixel2::from).collect(), cfg).map_err(py_err)?;
    Ok(clustering::assign_labels(&data, &c).as_slice().to_vec())
}

#[pyfunction]
fn silhouette(points: Vec<(f64, f64)>, labels: Vec<usize>) -> PyResult<f64> {
    metrics::silhouette(&point_set(points)?, &labels_of(labels)?).map_err(py_err)
}

#[pyfunction]
fn calinski_harabasz(points: Vec<(f64, f64)>, labels: Vec<usize>) -> PyResult<f64> {
    metrics::calinski_harabasz(&point_set(points)?, &labels_of(labels)?).map_err(py_err)
}

#[pyfunction]
fn backproject_pixel(u: f64, v: f64, depth_mm: f64, intrinsics: &PyIntrinsics) -> PyResult<(f64, f64, f64)> {
    let p = backproject(Pixel2::new(u, v), depth_mm, &intrinsics.0).map_err(py_err)?;
    Ok((p.x, p.y, p.z))
}

/// Writes a synthetic dataset and returns the number of samples.
#[pyfunction]
#[pyo3(signature = (config, count, seed, out_dir, width = 640, height = 360))]
fn synth(config: &PyShapeConfig, count: usize, seed: u64, out_dir: &str, width: usize, height: usize) -> PyResult<usize> {
    let m = gen_synthetic(config.0, count, seed, width, height, out_dir).map_err(py_err)?;
    Ok(m.samples.len())
}

/// Runs the benchmark over a dataset and returns the report CSV.
#[pyfunction]
#[pyo3(name = "bench", signature = (dataset, methods = None, seed = 0, jobs = 0))]
fn run_benchmark(dataset: &str, methods: Option<Vec<String>>, seed: u64, jobs: usize) -> PyResult<String> {
    let methods = match methods {
        Some(ms) => ms.iter().map(|m| m.parse()).collect::<Result<Vec<Method>, _>>().map_err(py_err)?,
        None => Method::ALL.to_vec(),
    };
    let manifest = read_manifest(dataset).map_err(py_err)?;
    let opts = BenchOptions { jobs, ..BenchOptions::new(methods, seed) };
    let report = run_bench(&manifest, &opts, &WallClock).map_err(py_err)?;
    Ok(report.table.to_csv())
}

#[pymodule]
#[pyo3(name = "shapeclust")]
pub fn shapeclust_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyShapeConfig>()?;
    m.add_class::<PyClusterParams>()?;
    m.add_class::<PyIntrinsics>()?;
    m.add_class::<PyDepthFrame>()?;
    m.add_class::<PyShape>()?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(detect_points, m)?)?;
    m.add_function(wrap_pyfunction!(detect_file, m)?)?;
    m.add_function(wrap_pyfunction!(sort, m)?)?;
    m.add_function(wrap_pyfunction!(assign_labels, m)?)?;
    m.add_function(wrap_pyfunction!(silhouette, m)?)?;
    m.add_function(wrap_pyfunction!(calinski_harabasz, m)?)?;
    m.add_function(wrap_pyfunction!(backproject_pixel, m)?)?;
    m.add_function(wrap_pyfunction!(synth, m)?)?;
    m.add_function(wrap_pyfunction!(run_benchmark, m)?)?;
    Ok(())
}
