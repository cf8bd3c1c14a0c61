use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Snaps a `[0, 1]` value onto the 8-bit grid: `round_half_up(v·255) / 255`.
pub fn quantize_unit(v: f32) -> f32 {
    to_u8(v) as f32 / 255.0
}

pub(crate) fn to_u8(v: f32) -> u8 {
    let s = libm::floor(v as f64 * 255.0 + 0.5);
    s.clamp(0.0, 255.0) as u8
}

/// Interleaved image with values in `[0, 1]`, 1 (gray) or 3 (RGB) channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f32>,
}

impl ImageBuffer {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("image dimensions must be ≥ 1".into()));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidArgument(alloc::format!(
                "images have 1 or 3 channels, got {channels}"
            )));
        }
        if data.len() != width * height * channels {
            return Err(Error::Shape {
                expected: (channels, height, width),
                found: (data.len(), 1, 1),
            });
        }
        if let Some(i) = data.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::OutOfRange {
                what: "pixel value",
                value: data[i] as f64,
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: f32) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    /// Builds an image from `f(x, y, channel)`, clamping into `[0, 1]`.
    pub fn from_fn(
        width: usize,
        height: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f32,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * channels);
        for y in 0..height {
            for x in 0..width {
                for c in 0..channels {
                    data.push(f(x, y, c).clamp(0.0, 1.0));
                }
            }
        }
        Self::new(width, height, channels, data)
    }

    /// Converts 8-bit samples by `v / 255`.
    pub fn from_u8(width: usize, height: usize, channels: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(
            width,
            height,
            channels,
            bytes.iter().map(|&b| b as f32 / 255.0).collect(),
        )
    }

    /// 8-bit samples with round-half-up.
    pub fn to_u8(&self) -> Vec<u8> {
        self.data.iter().map(|&v| to_u8(v)).collect()
    }

    /// The image snapped onto the 8-bit grid it would be stored with.
    pub fn quantized(&self) -> Self {
        Self {
            data: self.data.iter().map(|&v| quantize_unit(v)).collect(),
            ..self.clone()
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> f32 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// Rec.601 luma for RGB, the single channel otherwise.
    pub fn luma(&self) -> Vec<f64> {
        if self.channels == 1 {
            return self.data.iter().map(|&v| v as f64).collect();
        }
        self.data
            .chunks_exact(3)
            .map(|p| 0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64)
            .collect()
    }

    pub(crate) fn from_raw_unchecked(
        width: usize,
        height: usize,
        channels: usize,
        data: Vec<f32>,
    ) -> Self {
        debug_assert_eq!(data.len(), width * height * channels);
        Self {
            width,
            height,
            channels,
            data,
        }
    }
}

/// Dense per-pixel displacement `(dx, dy)` in pixels, interleaved row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionField {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl MotionField {
    pub fn new(width: usize, height: usize, data: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("field dimensions must be ≥ 1".into()));
        }
        if data.len() != width * height * 2 {
            return Err(Error::Shape {
                expected: (2, height, width),
                found: (data.len(), 1, 1),
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("field values must be finite".into()));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![0.0; width * height * 2])
    }

    pub fn constant(width: usize, height: usize, d: [f32; 2]) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 2);
        for _ in 0..width * height {
            data.extend_from_slice(&d);
        }
        Self::new(width, height, data)
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [f32; 2],
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 2);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> [f32; 2] {
        let i = (y * self.width + x) * 2;
        [self.data[i], self.data[i + 1]]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    /// Largest displacement magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.data
            .chunks_exact(2)
            .map(|d| libm::hypot(d[0] as f64, d[1] as f64))
            .fold(0.0, f64::max)
    }

    pub(crate) fn from_raw_unchecked(width: usize, height: usize, data: Vec<f32>) -> Self {
        debug_assert_eq!(data.len(), width * height * 2);
        Self {
            width,
            height,
            data,
        }
    }

    /// Bilinear sample at a real position, clamped to the field border.
    pub(crate) fn sample_clamped(&self, x: f64, y: f64) -> [f64; 2] {
        let max_x = (self.width - 1) as f64;
        let max_y = (self.height - 1) as f64;
        let x = if x.is_nan() { 0.0 } else { x.clamp(0.0, max_x) };
        let y = if y.is_nan() { 0.0 } else { y.clamp(0.0, max_y) };
        let x0 = libm::floor(x) as usize;
        let y0 = libm::floor(y) as usize;
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let mut out = [0.0; 2];
        for (c, o) in out.iter_mut().enumerate() {
            let p = |xx: usize, yy: usize| self.data[(yy * self.width + xx) * 2 + c] as f64;
            let top = (1.0 - fx) * p(x0, y0) + fx * p(x1, y0);
            let bottom = (1.0 - fx) * p(x0, y1) + fx * p(x1, y1);
            *o = (1.0 - fy) * top + fy * bottom;
        }
        out
    }
}

/// Per-pixel validity flag for a field or image grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl ValidMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Shape {
                expected: (1, height, width),
                found: (data.len(), 1, 1),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn all_valid(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![true; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, valid: bool) {
        self.data[y * self.width + x] = valid;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    /// Pixel-wise AND.
    pub fn and(&self, other: &ValidMask) -> Result<ValidMask> {
        if (self.width, self.height) != (other.width, other.height) {
            return Err(Error::Shape {
                expected: (1, self.height, self.width),
                found: (1, other.height, other.width),
            });
        }
        Ok(Self {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a && b)
                .collect(),
        })
    }

    pub(crate) fn check_dims(&self, width: usize, height: usize) -> Result<()> {
        if (self.width, self.height) != (width, height) {
            return Err(Error::Shape {
                expected: (1, height, width),
                found: (1, self.height, self.width),
            });
        }
        Ok(())
    }
}
