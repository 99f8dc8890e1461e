//! Binary PNM (P5/P6) decoding and encoding on top of the `image` codec.
//!
//! - P6, maxval 255: RGB image
//! - P5, maxval 255: binary mask, a pixel is set iff its value is ≥ 128
//! - P5, maxval 65535: depth frame, big-endian millimetres, 0 = missing
//!
//! Other maxvals are rejected rather than rescaled, so depth values are
//! never altered.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::codecs::pnm::{
    GraymapHeader, PixmapHeader, PnmDecoder, PnmEncoder, PnmHeader, PnmSubtype, SampleEncoding,
};
use image::{ExtendedColorType, ImageDecoder, ImageError};

use crate::error::{Error, Result};
use crate::imaging::{BinaryMask, RgbImage};
use crate::lift::DepthFrame;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PnmImage {
    Rgb(RgbImage),
    Mask(BinaryMask),
    Depth(DepthFrame),
}

impl PnmImage {
    pub fn kind(&self) -> &'static str {
        match self {
            PnmImage::Rgb(_) => "RGB image",
            PnmImage::Mask(_) => "mask",
            PnmImage::Depth(_) => "depth frame",
        }
    }
}

fn header_error(e: ImageError) -> Error {
    match e {
        ImageError::Unsupported(u) => Error::UnsupportedVariant(u.to_string()),
        e => Error::MalformedHeader(e.to_string()),
    }
}

fn decoder(bytes: &[u8]) -> Result<PnmDecoder<Cursor<&[u8]>>> {
    PnmDecoder::new(Cursor::new(bytes)).map_err(header_error)
}

pub fn decode_pnm(bytes: &[u8]) -> Result<PnmImage> {
    let (rest, header) = decoder(bytes)?.into_inner();
    let (width, height) = (header.width() as usize, header.height() as usize);
    let maxval = header.maximal_sample();
    let (channels, sample_bytes) = match (header.subtype(), maxval) {
        (PnmSubtype::Pixmap(SampleEncoding::Binary), 255) => (3, 1),
        (PnmSubtype::Graymap(SampleEncoding::Binary), 255) => (1, 1),
        (PnmSubtype::Graymap(SampleEncoding::Binary), 65535) => (1, 2),
        (subtype, _) => {
            return Err(Error::UnsupportedVariant(format!("{subtype:?} with maxval {maxval}")));
        }
    };
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!("empty image {width}x{height}")));
    }
    let expected = width * height * channels * sample_bytes;
    let found = bytes.len() - rest.position() as usize;
    if found < expected {
        return Err(Error::TruncatedData { expected, found });
    }

    let mut raster = vec![0u8; expected];
    decoder(bytes)?.read_image(&mut raster).map_err(|e| Error::Parse(format!("PNM raster: {e}")))?;
    Ok(match (channels, sample_bytes) {
        (3, _) => PnmImage::Rgb(RgbImage::new(width, height, raster)?),
        (1, 1) => PnmImage::Mask(BinaryMask::from_bits(width, height, raster.iter().map(|&b| b >= 128).collect())?),
        // the decoder hands back 16-bit samples in native byte order
        _ => PnmImage::Depth(DepthFrame::new(
            width,
            height,
            raster.chunks_exact(2).map(|c| u16::from_ne_bytes([c[0], c[1]])).collect(),
        )?),
    })
}

pub fn read_pnm(path: impl AsRef<Path>) -> Result<PnmImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pnm(&bytes)
}

fn dim(d: usize) -> u32 {
    u32::try_from(d).expect("image dimension fits in u32")
}

fn graymap(width: usize, height: usize, maxwhite: u32) -> PnmHeader {
    GraymapHeader { encoding: SampleEncoding::Binary, width: dim(width), height: dim(height), maxwhite }.into()
}

/// `samples` holds 16-bit values in native byte order for `L16`.
fn encode(header: PnmHeader, samples: &[u8], color: ExtendedColorType) -> Vec<u8> {
    let (width, height) = (header.width(), header.height());
    let mut out = Vec::new();
    PnmEncoder::new(&mut out).with_header(header).encode(samples, width, height, color).expect("encoding into memory");
    out
}

pub fn encode_rgb(image: &RgbImage) -> Vec<u8> {
    let header =
        PixmapHeader { encoding: SampleEncoding::Binary, width: dim(image.width()), height: dim(image.height()), maxval: 255 };
    encode(header.into(), image.data(), ExtendedColorType::Rgb8)
}

pub fn encode_mask(mask: &BinaryMask) -> Vec<u8> {
    let levels: Vec<u8> = mask.bits().iter().map(|&b| if b { 255 } else { 0 }).collect();
    encode(graymap(mask.width(), mask.height(), 255), &levels, ExtendedColorType::L8)
}

pub fn encode_depth(depth: &DepthFrame) -> Vec<u8> {
    let bytes: Vec<u8> = depth.data().iter().flat_map(|d| d.to_ne_bytes()).collect();
    encode(graymap(depth.width(), depth.height(), 65535), &bytes, ExtendedColorType::L16)
}

pub fn encode_pnm(image: &PnmImage) -> Vec<u8> {
    match image {
        PnmImage::Rgb(i) => encode_rgb(i),
        PnmImage::Mask(m) => encode_mask(m),
        PnmImage::Depth(d) => encode_depth(d),
    }
}

pub fn write_pnm(image: &PnmImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pnm(image)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_threshold_at_128() {
        let mut bytes = b"P5\n2 1\n255\n".to_vec();
        bytes.extend([255, 0]);
        let PnmImage::Mask(m) = decode_pnm(&bytes).unwrap() else { panic!() };
        assert_eq!(m.bits(), &[true, false]);
        let mut bytes = b"P5 3 1 255\n".to_vec();
        bytes.extend([128, 127, 200]);
        let PnmImage::Mask(m) = decode_pnm(&bytes).unwrap() else { panic!() };
        assert_eq!(m.bits(), &[true, false, true]);
    }

    #[test]
    fn sixteen_bit_depth_is_big_endian() {
        let mut bytes = b"P5\n1 1\n65535\n".to_vec();
        bytes.extend([0x03, 0xE8]);
        let PnmImage::Depth(d) = decode_pnm(&bytes).unwrap() else { panic!() };
        assert_eq!(d.get(0, 0), 1000);
    }

    #[test]
    fn comments_and_whitespace_in_header() {
        let mut bytes = b"P6 # rgb\n# size follows\n 2\t1 # w h\n255\n".to_vec();
        bytes.extend([1, 2, 3, 4, 5, 6]);
        let PnmImage::Rgb(img) = decode_pnm(&bytes).unwrap() else { panic!() };
        assert_eq!(img.get(1, 0), [4, 5, 6]);
    }

    #[test]
    fn error_cases() {
        let mut bytes = b"P6\n2 2\n255\n".to_vec();
        bytes.extend([0; 9]);
        assert!(matches!(decode_pnm(&bytes), Err(Error::TruncatedData { expected: 12, found: 9 })));
        for magic in ["P1", "P2", "P3", "P4"] {
            let bytes = format!("{magic}\n1 1\n255\n0");
            assert!(matches!(decode_pnm(bytes.as_bytes()), Err(Error::UnsupportedVariant(_))), "{magic}");
        }
        assert!(matches!(decode_pnm(b"P5\n1 1\n1023\n\0\0"), Err(Error::UnsupportedVariant(_))));
        assert!(matches!(decode_pnm(b"P5\nx 1\n255\n\0"), Err(Error::MalformedHeader(_))));
        assert!(matches!(decode_pnm(b"GIF89a"), Err(Error::MalformedHeader(_))));
        assert!(matches!(decode_pnm(b"P5\n1 1\n255"), Err(Error::TruncatedData { expected: 1, found: 0 })));
    }

    #[test]
    fn encoders_round_trip() {
        let img = RgbImage::new(2, 1, vec![1, 2, 3, 250, 251, 252]).unwrap();
        assert_eq!(decode_pnm(&encode_rgb(&img)).unwrap(), PnmImage::Rgb(img));
        let d = DepthFrame::new(2, 2, vec![0, 1, 65535, 1000]).unwrap();
        let bytes = encode_depth(&d);
        assert!(bytes.starts_with(b"P5") && bytes.ends_with(&[0x00, 0x01, 0xFF, 0xFF, 0x03, 0xE8]));
        assert_eq!(decode_pnm(&bytes).unwrap(), PnmImage::Depth(d));
        let m = BinaryMask::from_bits(3, 1, vec![true, false, true]).unwrap();
        assert!(encode_mask(&m).ends_with(b"255\n\xff\x00\xff"));
    }
}
