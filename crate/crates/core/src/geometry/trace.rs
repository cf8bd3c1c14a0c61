use alloc::vec::Vec;
use core::f64::consts::PI;

use super::rotation::{slerp, Rotation};
use crate::error::{Error, Result};

/// One gyroscope reading: angular velocity in rad/s about the camera
/// x (right), y (down) and z (forward) axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GyroSample {
    pub t_ns: i64,
    pub omega: [f64; 3],
}

/// Angular-velocity record covering one capture, `[0, duration_ns]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GyroTrace {
    samples: Vec<GyroSample>,
    duration_ns: i64,
}

impl GyroTrace {
    pub fn new(samples: Vec<GyroSample>, duration_ns: i64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidTrace(alloc::format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        for (i, s) in samples.iter().enumerate() {
            if s.t_ns < 0 {
                return Err(Error::InvalidTrace(alloc::format!(
                    "sample {i} has negative timestamp {}",
                    s.t_ns
                )));
            }
            if !s.omega.iter().all(|w| w.is_finite()) {
                return Err(Error::InvalidTrace(alloc::format!(
                    "sample {i} has non-finite angular velocity"
                )));
            }
        }
        if let Some(i) = samples.windows(2).position(|w| w[1].t_ns <= w[0].t_ns) {
            return Err(Error::InvalidTrace(alloc::format!(
                "timestamps not strictly increasing at sample {}",
                i + 1
            )));
        }
        let last = samples[samples.len() - 1].t_ns;
        if duration_ns < last {
            return Err(Error::InvalidTrace(alloc::format!(
                "duration {duration_ns} ns ends before last sample at {last} ns"
            )));
        }
        Ok(Self {
            samples,
            duration_ns,
        })
    }

    /// A trace whose duration ends at its last sample.
    pub fn from_samples(samples: Vec<GyroSample>) -> Result<Self> {
        let end = samples.last().map_or(0, |s| s.t_ns);
        Self::new(samples, end)
    }

    pub fn samples(&self) -> &[GyroSample] {
        &self.samples
    }

    pub fn duration_ns(&self) -> i64 {
        self.duration_ns
    }
}

/// Cumulative orientations at every knot of a trace, for repeated queries.
///
/// Angular velocity is held constant over each sample interval: sample `i`
/// drives `[t_i, t_{i+1})`, the first sample also drives `[0, t_0)` and the
/// last one drives `[t_last, duration]`.
#[derive(Debug, Clone)]
pub struct TraceIntegrator {
    knots_ns: Vec<f64>,
    omegas: Vec<[f64; 3]>,
    poses: Vec<Rotation>,
    duration_ns: i64,
}

impl TraceIntegrator {
    pub fn new(trace: &GyroTrace) -> Self {
        let samples = trace.samples();
        let mut knots_ns = Vec::with_capacity(samples.len() + 2);
        let mut omegas = Vec::with_capacity(samples.len() + 1);
        if samples[0].t_ns > 0 {
            knots_ns.push(0.0);
            omegas.push(samples[0].omega);
        }
        for s in samples {
            knots_ns.push(s.t_ns as f64);
            omegas.push(s.omega);
        }
        if trace.duration_ns() > samples[samples.len() - 1].t_ns {
            knots_ns.push(trace.duration_ns() as f64);
        } else {
            omegas.pop();
        }

        let mut poses = Vec::with_capacity(knots_ns.len());
        let mut pose = Rotation::IDENTITY;
        poses.push(pose);
        for (i, w) in omegas.iter().enumerate() {
            let dt = (knots_ns[i + 1] - knots_ns[i]) * 1e-9;
            pose = pose * Rotation::exp_unchecked([w[0] * dt, w[1] * dt, w[2] * dt]);
            poses.push(pose);
        }
        Self {
            knots_ns,
            omegas,
            poses,
            duration_ns: trace.duration_ns(),
        }
    }

    /// Camera orientation at `t_ns` relative to the orientation at t = 0.
    pub fn orientation_at(&self, t_ns: f64) -> Result<Rotation> {
        if !(t_ns >= 0.0 && t_ns <= self.duration_ns as f64) {
            return Err(Error::OutOfRange {
                what: "query time (ns)",
                value: t_ns,
                min: 0.0,
                max: self.duration_ns as f64,
            });
        }
        // Index of the interval [knot_i, knot_{i+1}) containing t.
        let i = match self
            .knots_ns
            .binary_search_by(|k| k.partial_cmp(&t_ns).unwrap())
        {
            Ok(i) => return Ok(self.poses[i]),
            Err(0) => return Ok(self.poses[0]),
            Err(i) => i - 1,
        };
        if i >= self.omegas.len() {
            return Ok(self.poses[self.poses.len() - 1]);
        }
        let span = self.knots_ns[i + 1] - self.knots_ns[i];
        let w = self.omegas[i];
        let interval_angle =
            libm::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]) * span * 1e-9;
        if interval_angle < PI {
            slerp(&self.poses[i], &self.poses[i + 1], (t_ns - self.knots_ns[i]) / span)
        } else {
            // Shortest-arc interpolation would take the wrong way round.
            let dt = (t_ns - self.knots_ns[i]) * 1e-9;
            Ok(self.poses[i] * Rotation::exp_unchecked([w[0] * dt, w[1] * dt, w[2] * dt]))
        }
    }
}

/// Orientation of the camera at `t_query` (ns) relative to its pose at t = 0.
pub fn integrate_trace(trace: &GyroTrace, t_query: i64) -> Result<Rotation> {
    if t_query < 0 || t_query > trace.duration_ns() {
        return Err(Error::OutOfRange {
            what: "query time (ns)",
            value: t_query as f64,
            min: 0.0,
            max: trace.duration_ns() as f64,
        });
    }
    TraceIntegrator::new(trace).orientation_at(t_query as f64)
}
