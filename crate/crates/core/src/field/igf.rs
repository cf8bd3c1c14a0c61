use alloc::vec::Vec;

use super::buffers::{MotionField, ValidMask};
use crate::error::{Error, Result};
use crate::geometry::{
    homography_from_rotation, CameraIntrinsics, GyroTrace, Rotation, TraceIntegrator,
};

/// When each sensor row is read out.
///
/// Row `r` of an `H`-row frame is captured at `t0_ns + r·readout_ns/(H−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowTiming {
    pub readout_ns: i64,
    pub t0_ns: i64,
    /// Row whose pose the corrected image is expressed in.
    pub reference_row: u32,
}

impl RowTiming {
    pub fn new(readout_ns: i64, t0_ns: i64, reference_row: u32) -> Result<Self> {
        if readout_ns <= 0 {
            return Err(Error::InvalidArgument(alloc::format!(
                "readout must be positive, got {readout_ns} ns"
            )));
        }
        if t0_ns < 0 {
            return Err(Error::InvalidArgument(alloc::format!(
                "first-row time must be non-negative, got {t0_ns} ns"
            )));
        }
        Ok(Self {
            readout_ns,
            t0_ns,
            reference_row,
        })
    }

    /// Same timing with the reference moved to the center row of an
    /// `height`-row frame.
    pub fn centered(self, height: usize) -> Self {
        Self {
            reference_row: (height.saturating_sub(1) / 2) as u32,
            ..self
        }
    }

    /// Capture time of `row` in an `height`-row frame, in nanoseconds.
    pub fn row_time_ns(&self, row: usize, height: usize) -> f64 {
        if height <= 1 {
            return self.t0_ns as f64;
        }
        self.t0_ns as f64 + row as f64 * self.readout_ns as f64 / (height - 1) as f64
    }
}

/// Rotation of every row's camera pose relative to the reference row's pose.
pub fn row_rotations(trace: &GyroTrace, timing: &RowTiming, height: usize) -> Result<Vec<Rotation>> {
    if height == 0 {
        return Err(Error::InvalidArgument("height must be ≥ 1".into()));
    }
    if timing.reference_row as usize >= height {
        return Err(Error::OutOfRange {
            what: "reference row",
            value: timing.reference_row as f64,
            min: 0.0,
            max: (height - 1) as f64,
        });
    }
    let end = timing.t0_ns.saturating_add(timing.readout_ns);
    if timing.t0_ns < 0 || end > trace.duration_ns() {
        return Err(Error::Coverage {
            needed_ns: end,
            duration_ns: trace.duration_ns(),
        });
    }
    let integrator = TraceIntegrator::new(trace);
    let reference = timing.reference_row as usize;
    let ref_pose_inv = integrator
        .orientation_at(timing.row_time_ns(reference, height))?
        .inverse();
    (0..height)
        .map(|r| {
            if r == reference {
                Ok(Rotation::IDENTITY)
            } else {
                Ok(ref_pose_inv * integrator.orientation_at(timing.row_time_ns(r, height))?)
            }
        })
        .collect()
}

/// Builds the per-pixel correction field from per-row rotations.
///
/// Pixel `(x, y)` gets `π(H_y·[x, y, 1]) − (x, y)` with `H_y = K·R_y·K⁻¹`,
/// so that `remap(rs, field)` samples the rolling-shutter image where the
/// reference-pose pixel landed. Pixels whose projection goes to infinity get
/// a zero displacement and are cleared in the returned mask.
pub fn build_igf(
    k: &CameraIntrinsics,
    rows: &[Rotation],
    width: usize,
    height: usize,
) -> Result<(MotionField, ValidMask)> {
    if width != k.width as usize || height != k.height as usize {
        return Err(Error::Shape {
            expected: (2, k.height as usize, k.width as usize),
            found: (2, height, width),
        });
    }
    if rows.len() != height {
        return Err(Error::Shape {
            expected: (1, height, 1),
            found: (1, rows.len(), 1),
        });
    }
    let mut data = Vec::with_capacity(width * height * 2);
    let mut mask = ValidMask::all_valid(width, height);
    for (y, r) in rows.iter().enumerate() {
        let h = *homography_from_rotation(k, r).matrix();
        let yf = y as f64;
        // Row-constant parts of H·[x, y, 1].
        let (bx, by, bw) = (
            h[0][1] * yf + h[0][2],
            h[1][1] * yf + h[1][2],
            h[2][1] * yf + h[2][2],
        );
        for x in 0..width {
            let xf = x as f64;
            let w = h[2][0] * xf + bw;
            if !(libm::fabs(w) > 1e-9) {
                data.extend_from_slice(&[0.0, 0.0]);
                mask.set(x, y, false);
                continue;
            }
            // (u/w − x) computed as (u − x·w)/w.
            let dx = (h[0][0] * xf + bx - xf * w) / w;
            let dy = (h[1][0] * xf + by - yf * w) / w;
            if !(dx.is_finite() && dy.is_finite()) {
                data.extend_from_slice(&[0.0, 0.0]);
                mask.set(x, y, false);
                continue;
            }
            data.push(dx as f32);
            data.push(dy as f32);
        }
    }
    Ok((MotionField::from_raw_unchecked(width, height, data), mask))
}
