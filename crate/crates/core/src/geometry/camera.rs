use core::ops::Mul;

use super::mat3::{self, Mat3};
use super::rotation::Rotation;
use crate::error::{Error, Result};

/// Pinhole intrinsics in pixels, tied to an image size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: u32,
    pub height: u32,
}

impl CameraIntrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64, width: u32, height: u32) -> Result<Self> {
        let k = Self {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fx.is_finite() && self.fx > 0.0 && self.fy.is_finite() && self.fy > 0.0) {
            return Err(Error::InvalidArgument(alloc::format!(
                "focal lengths must be positive, got fx = {}, fy = {}",
                self.fx,
                self.fy
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidArgument("image size must be nonzero".into()));
        }
        if !(self.cx >= 0.0 && self.cx < self.width as f64) {
            return Err(Error::OutOfRange {
                what: "cx",
                value: self.cx,
                min: 0.0,
                max: self.width as f64,
            });
        }
        if !(self.cy >= 0.0 && self.cy < self.height as f64) {
            return Err(Error::OutOfRange {
                what: "cy",
                value: self.cy,
                min: 0.0,
                max: self.height as f64,
            });
        }
        Ok(())
    }

    pub fn matrix(&self) -> Mat3 {
        [
            [self.fx, 0.0, self.cx],
            [0.0, self.fy, self.cy],
            [0.0, 0.0, 1.0],
        ]
    }

    pub fn inverse_matrix(&self) -> Mat3 {
        [
            [1.0 / self.fx, 0.0, -self.cx / self.fx],
            [0.0, 1.0 / self.fy, -self.cy / self.fy],
            [0.0, 0.0, 1.0],
        ]
    }

    /// Intrinsics for the same camera resampled to `width × height`, using
    /// pixel-center alignment (`x' + ½ = s·(x + ½)`), the same convention as
    /// [`upsample_field`](crate::field::upsample_field).
    pub fn scaled(&self, width: u32, height: u32) -> Result<Self> {
        let sx = width as f64 / self.width as f64;
        let sy = height as f64 / self.height as f64;
        let cx = ((self.cx + 0.5) * sx - 0.5).max(0.0);
        let cy = ((self.cy + 0.5) * sy - 0.5).max(0.0);
        Self::new(self.fx * sx, self.fy * sy, cx, cy, width, height)
    }
}

/// Projective 3×3 map, scaled so that element (2,2) is 1 whenever it is
/// nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Homography(Mat3);

impl Homography {
    pub const IDENTITY: Homography = Homography(mat3::IDENTITY);

    pub fn from_matrix(m: Mat3) -> Result<Self> {
        if !m.iter().flatten().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("homography has non-finite entries".into()));
        }
        if !(libm::fabs(mat3::det(&m)) > 1e-12) {
            return Err(Error::InvalidArgument("homography is singular".into()));
        }
        Ok(Self(normalize(m)))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = mat3::inverse(&self.0, 1e-300)
            .ok_or_else(|| Error::InvalidArgument("homography is singular".into()))?;
        Ok(Self(normalize(inv)))
    }

    pub fn apply(&self, p: [f64; 2]) -> Result<[f64; 2]> {
        apply_homography(self, p)
    }
}

impl Mul for Homography {
    type Output = Homography;

    fn mul(self, rhs: Homography) -> Homography {
        Homography(normalize(mat3::mul(&self.0, &rhs.0)))
    }
}

fn normalize(m: Mat3) -> Mat3 {
    let s = m[2][2];
    if libm::fabs(s) > 1e-12 {
        mat3::scale(&m, 1.0 / s)
    } else {
        m
    }
}

/// Rotation-only homography `K · R · K⁻¹`.
///
/// Evaluated as `I + K (R − I) K⁻¹`, which is exact for the identity and
/// keeps small-rotation displacements free of cancellation error.
pub fn homography_from_rotation(k: &CameraIntrinsics, r: &Rotation) -> Homography {
    let delta = mat3::sub(&r.matrix(), &mat3::IDENTITY);
    let h = mat3::add(
        &mat3::IDENTITY,
        &mat3::mul(&mat3::mul(&k.matrix(), &delta), &k.inverse_matrix()),
    );
    Homography(normalize(h))
}

/// Projects `p` through `h`: `(h·[x, y, 1])` divided by its third component.
pub fn apply_homography(h: &Homography, p: [f64; 2]) -> Result<[f64; 2]> {
    let [x, y, w] = mat3::mul_vec(&h.0, [p[0], p[1], 1.0]);
    if !(libm::fabs(w) > 1e-9) {
        return Err(Error::PointAtInfinity);
    }
    Ok([x / w, y / w])
}
