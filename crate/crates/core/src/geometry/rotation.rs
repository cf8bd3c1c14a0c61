use core::ops::Mul;

use super::mat3::Mat3;
use crate::error::{Error, Result};

/// Below this angle (radians) the axis-angle map switches to its series form.
const SERIES_THRESHOLD: f64 = 1e-12;

/// A 3D rotation stored as a unit quaternion `(w, x, y, z)`.
///
/// Composition follows the matrix convention: `(a * b).rotate(v)` equals
/// `a.rotate(b.rotate(v))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl Default for Rotation {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Builds a rotation from any nonzero finite quaternion, normalizing it.
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = libm::sqrt(w * w + x * x + y * y + z * z);
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidArgument(alloc::format!(
                "quaternion ({w}, {x}, {y}, {z}) cannot be normalized"
            )));
        }
        Ok(Self {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    /// `(w, x, y, z)`.
    pub fn quaternion(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Exponential map from a rotation vector (axis · angle, radians).
    pub fn from_rotation_vector(v: [f64; 3]) -> Result<Self> {
        if !v.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidArgument(alloc::format!(
                "rotation vector {v:?} is not finite"
            )));
        }
        Ok(Self::exp_unchecked(v))
    }

    pub(crate) fn exp_unchecked(v: [f64; 3]) -> Self {
        let theta2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        let theta = libm::sqrt(theta2);
        let (w, k) = if theta < SERIES_THRESHOLD {
            (1.0 - theta2 / 8.0, 0.5 - theta2 / 48.0)
        } else {
            let half = 0.5 * theta;
            (libm::cos(half), libm::sin(half) / theta)
        };
        let q = Self {
            w,
            x: k * v[0],
            y: k * v[1],
            z: k * v[2],
        };
        q.renormalized()
    }

    /// Logarithm map: the rotation vector of the shortest equivalent rotation.
    pub fn rotation_vector(&self) -> [f64; 3] {
        let (w, x, y, z) = if self.w < 0.0 {
            (-self.w, -self.x, -self.y, -self.z)
        } else {
            (self.w, self.x, self.y, self.z)
        };
        let s = libm::sqrt(x * x + y * y + z * z);
        let k = if s < 1e-300 {
            2.0 / w
        } else {
            2.0 * libm::atan2(s, w) / s
        };
        [k * x, k * y, k * z]
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        let s = libm::sqrt(self.x * self.x + self.y * self.y + self.z * self.z);
        2.0 * libm::atan2(s, libm::fabs(self.w))
    }

    /// Geodesic distance to `other` on SO(3).
    pub fn angle_to(&self, other: &Rotation) -> f64 {
        (self.inverse() * *other).angle()
    }

    pub fn inverse(&self) -> Self {
        Self {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn rotate(&self, v: [f64; 3]) -> [f64; 3] {
        super::mat3::mul_vec(&self.matrix(), v)
    }

    pub fn matrix(&self) -> Mat3 {
        let Self { w, x, y, z } = *self;
        let (xx, yy, zz) = (x * x, y * y, z * z);
        let (xy, xz, yz) = (x * y, x * z, y * z);
        let (wx, wy, wz) = (w * x, w * y, w * z);
        [
            [1.0 - 2.0 * (yy + zz), 2.0 * (xy - wz), 2.0 * (xz + wy)],
            [2.0 * (xy + wz), 1.0 - 2.0 * (xx + zz), 2.0 * (yz - wx)],
            [2.0 * (xz - wy), 2.0 * (yz + wx), 1.0 - 2.0 * (xx + yy)],
        ]
    }

    fn renormalized(self) -> Self {
        let n = libm::sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z);
        Self {
            w: self.w / n,
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        }
    }
}

impl Mul for Rotation {
    type Output = Rotation;

    fn mul(self, b: Rotation) -> Rotation {
        let a = self;
        Rotation {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        }
        .renormalized()
    }
}

/// Rodrigues conversion of an axis-angle vector to a rotation.
pub fn rodrigues(axis_angle: [f64; 3]) -> Result<Rotation> {
    Rotation::from_rotation_vector(axis_angle)
}

/// Spherical linear interpolation along the shortest arc from `a` to `b`.
pub fn slerp(a: &Rotation, b: &Rotation, u: f64) -> Result<Rotation> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::OutOfRange {
            what: "slerp parameter",
            value: u,
            min: 0.0,
            max: 1.0,
        });
    }
    if u == 0.0 {
        return Ok(*a);
    }
    if u == 1.0 {
        return Ok(*b);
    }
    let delta = a.inverse() * *b;
    let v = delta.rotation_vector();
    Ok(*a * Rotation::exp_unchecked([u * v[0], u * v[1], u * v[2]]))
}
