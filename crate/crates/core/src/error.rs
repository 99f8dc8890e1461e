use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the pipeline can report.
///
/// Variants are grouped by the CLI exit code they map to (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),

    // --- input / parse (exit 3) ---
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("roi {u0},{v0},{width}x{height} exceeds image {image_width}x{image_height}")]
    RoiOutOfBounds {
        u0: usize,
        v0: usize,
        width: usize,
        height: usize,
        image_width: usize,
        image_height: usize,
    },
    #[error("malformed PNM header: {0}")]
    MalformedHeader(String),
    #[error("truncated PNM data: expected {expected} bytes, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("unsupported PNM variant {0}")]
    UnsupportedVariant(String),
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("dataset sample {sample}: {source}")]
    Dataset {
        sample: String,
        #[source]
        source: Box<Error>,
    },

    // --- pipeline (exit 4) ---
    #[error("mask has no foreground pixels")]
    EmptyMask,
    #[error("no connected component reaches the minimum area {min_area} (largest is {largest})")]
    NoComponent { min_area: usize, largest: usize },
    #[error("{points} points cannot be clustered into {clusters} centroids")]
    InsufficientPoints { points: usize, clusters: usize },
    #[error("mixture component {component} collapsed (weight {weight:e})")]
    DegenerateFit { component: usize, weight: f64 },
    #[error("expected a {expected} configuration, found {found}")]
    ConfigMismatch { expected: &'static str, found: String },
    #[error("contour points are collinear")]
    DegenerateContour,
    #[error("{found} points cannot fill a {rows}x{cols} grid")]
    CountMismatch { rows: usize, cols: usize, found: usize },
    #[error("at least two distinct clusters are required")]
    SingleCluster,
    #[error("cluster count {k} is outside 2..={max}")]
    InvalidK { k: usize, max: usize },
    #[error("at least {required} points are required, found {found}")]
    TooFewPoints { required: usize, found: usize },
    #[error("depth must be positive")]
    InvalidDepth,
    #[error("no valid depth within {radius} px of ({u}, {v})")]
    UnrecoverableHole { u: usize, v: usize, radius: f64 },
    #[error("point ({u}, {v}) lies outside the {width}x{height} frame")]
    OutOfBounds { u: f64, v: f64, width: usize, height: usize },
    #[error("shape has {shape} points but lifted shape has {lifted}")]
    LengthMismatch { shape: usize, lifted: usize },

    // --- io (exit 5) ---
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code for the CLI: 2 usage, 3 input/parse, 4 pipeline, 5 io.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::InvalidParams(_)
            | Error::RoiOutOfBounds { .. }
            | Error::MalformedHeader(_)
            | Error::TruncatedData { .. }
            | Error::UnsupportedVariant(_)
            | Error::MissingKey(_)
            | Error::Parse(_)
            | Error::UnknownKey(_) => 3,
            Error::Dataset { source, .. } => source.exit_code(),
            Error::Io { .. } => 5,
            _ => 4,
        }
    }
}
