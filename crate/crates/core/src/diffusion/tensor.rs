use alloc::vec::Vec;

use super::schedule::NoiseSchedule;
use crate::error::{Error, Result};
use crate::field::MotionField;

/// Pixel displacement that maps to 1.0 in normalized field tensors (at the
/// 64×64 model resolution).
pub const DEFAULT_NORM_SCALE: f64 = 8.0;

/// Channel-planar `(channels, height, width)` tensor of `f64`.
///
/// Motion fields travel through the sampler in this form: channel 0 is dx and
/// channel 1 is dy, both divided by the normalization scale.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldTensor {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl FieldTensor {
    pub fn new(channels: usize, height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != channels * height * width {
            return Err(Error::Shape {
                expected: (channels, height, width),
                found: (data.len(), 1, 1),
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("tensor values must be finite".into()));
        }
        Ok(Self {
            channels,
            height,
            width,
            data,
        })
    }

    pub fn zeros(channels: usize, height: usize, width: usize) -> Self {
        Self {
            channels,
            height,
            width,
            data: alloc::vec![0.0; channels * height * width],
        }
    }

    pub fn filled(channels: usize, height: usize, width: usize, value: f64) -> Self {
        Self {
            channels,
            height,
            width,
            data: alloc::vec![value; channels * height * width],
        }
    }

    pub fn scalar(value: f64) -> Self {
        Self::filled(1, 1, 1, value)
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channels, self.height, self.width)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub(crate) fn check_same_shape(&self, other: &FieldTensor) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Shape {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(())
    }

    pub(crate) fn zip_map(
        &self,
        other: &FieldTensor,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<FieldTensor> {
        self.check_same_shape(other)?;
        Ok(FieldTensor {
            channels: self.channels,
            height: self.height,
            width: self.width,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}

/// Forward diffusion: `√ᾱ_t · x₀ + √(1 − ᾱ_t) · ε`.
pub fn q_sample(
    x0: &FieldTensor,
    t: usize,
    eps: &FieldTensor,
    s: &NoiseSchedule,
) -> Result<FieldTensor> {
    s.check_step(t)?;
    let ab = s.alpha_bar()[t];
    let (a, b) = (libm::sqrt(ab), libm::sqrt(1.0 - ab));
    x0.zip_map(eps, |x, e| a * x + b * e)
}

/// Pixel displacements divided by `norm_scale`, as a `(2, h, w)` tensor.
pub fn normalize_field(g: &MotionField, norm_scale: f64) -> Result<FieldTensor> {
    check_scale(norm_scale)?;
    let (w, h) = (g.width(), g.height());
    let plane = w * h;
    let mut data = alloc::vec![0.0; 2 * plane];
    for (i, d) in g.data().chunks_exact(2).enumerate() {
        data[i] = d[0] as f64 / norm_scale;
        data[plane + i] = d[1] as f64 / norm_scale;
    }
    Ok(FieldTensor {
        channels: 2,
        height: h,
        width: w,
        data,
    })
}

/// Inverse of [`normalize_field`].
pub fn denormalize_field(x: &FieldTensor, norm_scale: f64) -> Result<MotionField> {
    check_scale(norm_scale)?;
    let (c, h, w) = x.shape();
    if c != 2 {
        return Err(Error::Shape {
            expected: (2, h, w),
            found: (c, h, w),
        });
    }
    let plane = w * h;
    let mut data = Vec::with_capacity(2 * plane);
    for i in 0..plane {
        data.push((x.data[i] * norm_scale) as f32);
        data.push((x.data[plane + i] * norm_scale) as f32);
    }
    MotionField::new(w, h, data)
}

fn check_scale(norm_scale: f64) -> Result<()> {
    if !(norm_scale > 0.0 && norm_scale.is_finite()) {
        return Err(Error::InvalidArgument(alloc::format!(
            "norm_scale must be positive, got {norm_scale}"
        )));
    }
    Ok(())
}
