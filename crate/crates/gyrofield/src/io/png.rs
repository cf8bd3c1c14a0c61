use std::io::Cursor;
use std::path::Path;

use gyrofield_core::{ImageBuffer, ValidMask};
use image::{DynamicImage, ImageFormat, ImageReader};

use crate::error::{Error, Result};

fn decode(path: &Path) -> Result<DynamicImage> {
    let reader = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    reader.decode().map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::format(path, None, other.to_string()),
    })
}

/// Loads an 8-bit image into `[0, 1]`. Gray inputs stay single-channel,
/// everything else becomes RGB (alpha dropped, 16-bit reduced).
pub fn read_image(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let path = path.as_ref();
    let img = decode(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let out = if img.color().has_color() {
        ImageBuffer::from_u8(w, h, 3, img.to_rgb8().as_raw())
    } else {
        ImageBuffer::from_u8(w, h, 1, img.to_luma8().as_raw())
    };
    Ok(out?)
}

fn encode_png(w: usize, h: usize, color: image::ExtendedColorType, bytes: &[u8]) -> Vec<u8> {
    let mut out = Cursor::new(Vec::new());
    image::write_buffer_with_format(&mut out, bytes, w as u32, h as u32, color, ImageFormat::Png)
        .expect("in-memory png encoding");
    out.into_inner()
}

/// PNG bytes of `img` (values rounded half-up onto 8 bits).
pub fn encode_image(img: &ImageBuffer) -> Vec<u8> {
    let color = if img.channels() == 1 {
        image::ExtendedColorType::L8
    } else {
        image::ExtendedColorType::Rgb8
    };
    encode_png(img.width(), img.height(), color, &img.to_u8())
}

pub fn write_image(path: impl AsRef<Path>, img: &ImageBuffer) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_image(img)).map_err(|e| Error::io(path, e))
}

/// Gray PNG with 255 for valid pixels and 0 elsewhere.
pub fn encode_mask(mask: &ValidMask) -> Vec<u8> {
    let bytes: Vec<u8> = mask.data().iter().map(|&v| if v { 255 } else { 0 }).collect();
    encode_png(mask.width(), mask.height(), image::ExtendedColorType::L8, &bytes)
}

pub fn write_mask(path: impl AsRef<Path>, mask: &ValidMask) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_mask(mask)).map_err(|e| Error::io(path, e))
}

pub fn read_mask(path: impl AsRef<Path>) -> Result<ValidMask> {
    let path = path.as_ref();
    let img = decode(path)?;
    if img.color() != image::ColorType::L8 {
        return Err(Error::format(path, None, format!("mask must be 8-bit gray, found {:?}", img.color())));
    }
    let gray = img.to_luma8();
    let (w, h) = (gray.width() as usize, gray.height() as usize);
    let mut bits = Vec::with_capacity(w * h);
    for (i, &v) in gray.as_raw().iter().enumerate() {
        match v {
            0 => bits.push(false),
            255 => bits.push(true),
            _ => {
                return Err(Error::format(
                    path,
                    None,
                    format!("mask pixel ({}, {}) is {v}, expected 0 or 255", i % w, i / w),
                ))
            }
        }
    }
    Ok(ValidMask::new(w, h, bits)?)
}
