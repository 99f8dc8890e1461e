//! File formats: PNM rasters, intrinsics, shape CSV, dataset manifests,
//! SVG plots and the synthetic dataset generator.

pub mod manifest;
pub mod pnm;
pub mod svg;
pub mod synth;
pub mod text;

pub use manifest::{read_manifest, write_manifest, Manifest, SampleEntry, SampleImage, SampleSource};
pub use pnm::{decode_pnm, encode_pnm, read_pnm, write_pnm, PnmImage};
pub use svg::{render_svg, write_svg_plot};
pub use synth::{gen_synthetic, synth_sample, SyntheticSample};
pub use text::{
    format_shape_csv, parse_intrinsics, parse_shape_csv, read_intrinsics, read_shape_csv, write_shape_csv, ShapeTable,
};
