//! Command-line front end: `detect`, `bench` and `synth`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_bench, BenchOptions};
use crate::error::{Error, Result};
use crate::imaging::{HsvRange, RoiRect};
use crate::io::{self, read_intrinsics, read_manifest, read_pnm, write_shape_csv, write_svg_plot, PnmImage};
use crate::lift::{lift_shape, DEFAULT_SEARCH_RADIUS};
use crate::metrics::{coverage_radius, spacing_cv, DEFAULT_SC_CAP};
use crate::pipeline::{detect, Clock, FixedClock, InputImage, Segmentation, WallClock, DEFAULT_MIN_AREA};
use crate::types::{ClusterParams, Method, ShapeConfig};

#[derive(Debug, Parser)]
#[command(name = "shapeclust", version, about = "Clustering-based shape detection for deformable objects")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect an ordered shape in one image or mask.
    Detect(DetectArgs),
    /// Benchmark clustering methods over a dataset.
    Bench(BenchArgs),
    /// Generate a synthetic dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeKind {
    Centerline,
    Contour,
    Surface,
}

#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    #[arg(long, value_enum)]
    pub shape: ShapeKind,
    /// Number of shape points (centerline and contour; optional check for surface).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
}

impl ShapeArgs {
    pub fn config(&self) -> Result<ShapeConfig> {
        let cfg = match (self.shape, self.n, self.rows, self.cols) {
            (ShapeKind::Surface, n, Some(rows), Some(cols)) => {
                if n.is_some_and(|n| n != rows * cols) {
                    return Err(Error::Usage(format!("--n {} does not equal --rows {rows} x --cols {cols}", n.unwrap())));
                }
                ShapeConfig::surface(rows, cols)
            }
            (ShapeKind::Surface, ..) => return Err(Error::Usage("surface needs --rows and --cols".into())),
            (_, _, Some(_), _) | (_, _, _, Some(_)) => {
                return Err(Error::Usage("--rows/--cols only apply to --shape surface".into()))
            }
            (ShapeKind::Centerline, Some(n), ..) => ShapeConfig::Centerline(n),
            (ShapeKind::Contour, Some(n), ..) => ShapeConfig::Contour(n),
            (_, None, ..) => return Err(Error::Usage("--n is required".into())),
        };
        cfg.validate().map_err(|e| Error::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct DetectArgs {
    /// RGB image (P6) or mask (P5).
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, default_value = "som")]
    pub method: Method,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Crop rectangle `u0,v0,width,height`.
    #[arg(long)]
    pub roi: Option<RoiRect>,
    /// HSV box `h_lo,h_hi,s_lo,s_hi,v_lo,v_hi` (hue in degrees, others in [0, 1]).
    #[arg(long)]
    pub hsv: Option<HsvRange>,
    #[arg(long, default_value_t = DEFAULT_MIN_AREA)]
    pub min_area: usize,
    /// 16-bit depth frame (P5, maxval 65535, millimetres).
    #[arg(long, requires = "intrinsics")]
    pub depth: Option<PathBuf>,
    /// Intrinsics file with fx, fy, cx, cy.
    #[arg(long, requires = "depth")]
    pub intrinsics: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_RADIUS)]
    pub search_radius: f64,
    /// Write an SVG overlay.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Manifest file or dataset directory.
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "gmm,fcm,kma,som")]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Silhouette subsample size (0 = exact).
    #[arg(long, default_value_t = DEFAULT_SC_CAP)]
    pub sc_cap: usize,
    /// Report this duration for every fit instead of measuring it.
    #[arg(long, hide = true)]
    pub fixed_time: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = io::synth::DEFAULT_WIDTH)]
    pub width: usize,
    #[arg(long, default_value_t = io::synth::DEFAULT_HEIGHT)]
    pub height: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Detect(a) => run_detect(a, stdout, stderr),
        Command::Bench(a) => match a.fixed_time {
            Some(t) => run_bench_cmd(a, &FixedClock(t), stdout, stderr),
            None => run_bench_cmd(a, &WallClock, stdout, stderr),
        },
        Command::Synth(a) => run_synth(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn out_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

pub fn run_detect(a: &DetectArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let config = a.shape.config()?;
    let input = InputImage::try_from(read_pnm(&a.input)?)?;
    let seg = Segmentation { roi: a.roi, hsv: a.hsv, min_area: a.min_area };
    let params = ClusterParams::defaults(a.method).with_seed(a.seed);
    let found = detect(&input, &seg, config, &params, &WallClock)?;
    let m = found.points.len();
    if config.n() * 10 > m {
        writeln!(stderr, "warning: N={} exceeds M/10 for M={m}", config.n()).map_err(out_err)?;
    }

    let lifted = match (&a.depth, &a.intrinsics) {
        (Some(d), Some(k)) => {
            let PnmImage::Depth(depth) = read_pnm(d)? else {
                return Err(Error::UnsupportedVariant(format!("{} is not a 16-bit depth frame", d.display())));
            };
            if depth.width() != input.width() || depth.height() != input.height() {
                return Err(Error::InvalidParams(format!(
                    "depth frame is {}x{} but input is {}x{}",
                    depth.width(),
                    depth.height(),
                    input.width(),
                    input.height()
                )));
            }
            Some(lift_shape(&found.shape, &depth, &read_intrinsics(k)?, a.search_radius)?)
        }
        _ => None,
    };
    write_shape_csv(&found.shape, lifted.as_ref(), &a.out)?;
    if let Some(plot) = &a.plot {
        write_svg_plot(&found.object, &found.shape, plot)?;
    }

    let spacing = spacing_cv(&found.shape).map_or("nan".to_string(), |s| format!("{s:.4}"));
    writeln!(
        stdout,
        "M={m} N={} time_s={:.6} coverage_px={:.3} spacing_cv={spacing}",
        config.n(),
        found.fit_time_s,
        coverage_radius(&found.points, &found.centroids),
    )
    .map_err(out_err)
}

pub fn run_bench_cmd(a: &BenchArgs, clock: &impl Clock, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let manifest = read_manifest(&a.dataset)?;
    let opts = BenchOptions { methods: a.methods.clone(), seed: a.seed, jobs: a.jobs, sc_cap: a.sc_cap };
    let report = run_bench(&manifest, &opts, clock)?;
    fs::write(&a.out, report.table.to_csv()).map_err(|e| Error::io(&a.out, e))?;
    let failures = report.table.failures();
    if failures > 0 {
        writeln!(stderr, "warning: {failures} sample runs failed and were excluded from the means").map_err(out_err)?;
    }
    writeln!(stdout, "{} samples, config {}, report written to {}", report.table.samples, manifest.config, a.out.display())
        .map_err(out_err)
}

pub fn run_synth(a: &SynthArgs, stdout: &mut dyn Write) -> Result<()> {
    let config = a.shape.config()?;
    let m = io::gen_synthetic(config, a.count, a.seed, a.width, a.height, &a.out)?;
    writeln!(stdout, "wrote {} {} samples to {}", m.samples.len(), config, a.out.display()).map_err(out_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(kind: ShapeKind, n: Option<usize>, rows: Option<usize>, cols: Option<usize>) -> Result<ShapeConfig> {
        ShapeArgs { shape: kind, n, rows, cols }.config()
    }

    #[test]
    fn shape_flags() {
        assert_eq!(shape(ShapeKind::Centerline, Some(20), None, None).unwrap(), ShapeConfig::Centerline(20));
        assert_eq!(shape(ShapeKind::Surface, Some(32), Some(4), Some(8)).unwrap(), ShapeConfig::surface(4, 8));
        assert_eq!(shape(ShapeKind::Surface, None, Some(4), Some(8)).unwrap(), ShapeConfig::surface(4, 8));
        for bad in [
            shape(ShapeKind::Surface, Some(30), None, None),
            shape(ShapeKind::Surface, Some(30), Some(4), Some(8)),
            shape(ShapeKind::Contour, None, None, None),
            shape(ShapeKind::Contour, Some(8), Some(2), None),
            shape(ShapeKind::Centerline, Some(1), None, None),
        ] {
            assert_eq!(bad.unwrap_err().exit_code(), 2);
        }
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["shapeclust", "detect", "--shape", "centerline"], &mut out, &mut err), 2);
        assert_eq!(run(["shapeclust", "frobnicate"], &mut out, &mut err), 2);
        let args = ["shapeclust", "detect", "--input", "x.pgm", "--shape", "surface", "--n", "30", "--out", "o.csv"];
        assert_eq!(run(args, &mut out, &mut err), 2);
        assert_eq!(run(["shapeclust", "--help"], &mut out, &mut err), 0);
    }
}
