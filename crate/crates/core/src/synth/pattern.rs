use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{GyroSample, GyroTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    /// Angular velocity held at `amplitude`.
    Constant,
    /// `amplitude · sin(2π·f·t)` per axis.
    Sinusoid,
    /// White noise band-limited to `cutoff_hz`, scaled so each axis peaks at
    /// its amplitude.
    SmoothNoise,
}

impl PatternKind {
    pub fn name(&self) -> &'static str {
        match self {
            PatternKind::Constant => "constant",
            PatternKind::Sinusoid => "sinusoid",
            PatternKind::SmoothNoise => "smooth-noise",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "constant" => Some(PatternKind::Constant),
            "sinusoid" => Some(PatternKind::Sinusoid),
            "smooth-noise" => Some(PatternKind::SmoothNoise),
            _ => None,
        }
    }
}

/// Parameters of a synthetic camera-shake signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionPattern {
    pub kind: PatternKind,
    /// Peak angular velocity per axis, rad/s.
    pub amplitude: [f64; 3],
    /// Sinusoid frequency, Hz.
    pub frequency_hz: f64,
    /// Smooth-noise cutoff, Hz.
    pub cutoff_hz: f64,
    pub seed: u64,
}

impl MotionPattern {
    pub fn constant(amplitude: [f64; 3]) -> Self {
        Self {
            kind: PatternKind::Constant,
            amplitude,
            frequency_hz: 1.0,
            cutoff_hz: 1.0,
            seed: 0,
        }
    }

    pub fn sinusoid(amplitude: [f64; 3], frequency_hz: f64) -> Self {
        Self {
            kind: PatternKind::Sinusoid,
            frequency_hz,
            ..Self::constant(amplitude)
        }
    }

    pub fn smooth_noise(amplitude: [f64; 3], cutoff_hz: f64, seed: u64) -> Self {
        Self {
            kind: PatternKind::SmoothNoise,
            cutoff_hz,
            seed,
            ..Self::constant(amplitude)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.amplitude.iter().all(|a| a.is_finite() && *a >= 0.0) {
            return Err(Error::InvalidArgument(alloc::format!(
                "amplitudes must be finite and non-negative, got {:?}",
                self.amplitude
            )));
        }
        match self.kind {
            PatternKind::Sinusoid if !(self.frequency_hz > 0.0 && self.frequency_hz.is_finite()) => {
                Err(Error::InvalidArgument("sinusoid frequency must be positive".into()))
            }
            PatternKind::SmoothNoise if !(self.cutoff_hz > 0.0 && self.cutoff_hz.is_finite()) => {
                Err(Error::InvalidArgument("smooth-noise cutoff must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Samples a pattern at `rate_hz` over `[0, duration_ns]`.
pub fn gen_gyro_trace(pattern: &MotionPattern, duration_ns: i64, rate_hz: f64) -> Result<GyroTrace> {
    pattern.validate()?;
    if duration_ns <= 0 {
        return Err(Error::InvalidArgument(alloc::format!(
            "duration must be positive, got {duration_ns} ns"
        )));
    }
    let duration_s = duration_ns as f64 * 1e-9;
    if !(rate_hz.is_finite() && rate_hz * duration_s >= 2.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "rate {rate_hz} Hz gives fewer than 2 samples over {duration_ns} ns"
        )));
    }
    let period_ns = 1e9 / rate_hz;
    let times: Vec<i64> = (0..)
        .map(|k| libm::round(k as f64 * period_ns) as i64)
        .take_while(|&t| t <= duration_ns)
        .collect();
    let n = times.len();

    let omegas: Vec<[f64; 3]> = match pattern.kind {
        PatternKind::Constant => vec![pattern.amplitude; n],
        PatternKind::Sinusoid => times
            .iter()
            .map(|&t| {
                let s = libm::sin(TAU * pattern.frequency_hz * t as f64 * 1e-9);
                [
                    pattern.amplitude[0] * s,
                    pattern.amplitude[1] * s,
                    pattern.amplitude[2] * s,
                ]
            })
            .collect(),
        PatternKind::SmoothNoise => {
            let mut rng = ChaCha8Rng::seed_from_u64(pattern.seed);
            let mut axes = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
            for (axis, amp) in axes.iter_mut().zip(pattern.amplitude) {
                let white: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                *axis = band_limit(&white, pattern.cutoff_hz * n as f64 / rate_hz);
                let peak = axis.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
                let scale = if peak > 0.0 { amp / peak } else { 0.0 };
                axis.iter_mut().for_each(|v| *v *= scale);
            }
            (0..n).map(|k| [axes[0][k], axes[1][k], axes[2][k]]).collect()
        }
    };
    let samples = times
        .into_iter()
        .zip(omegas)
        .map(|(t_ns, omega)| GyroSample { t_ns, omega })
        .collect();
    GyroTrace::new(samples, duration_ns)
}

/// Ideal circular low-pass: keeps DFT bins `j ≤ max_bin` (and their mirror
/// images) of `signal` and zeroes the rest.
fn band_limit(signal: &[f64], max_bin: f64) -> Vec<f64> {
    let n = signal.len();
    let keep = (libm::floor(max_bin) as usize).min((n - 1) / 2);
    let mut out = vec![0.0; n];
    for j in 0..=keep {
        let (mut re, mut im) = (0.0, 0.0);
        for (k, &v) in signal.iter().enumerate() {
            let phase = TAU * ((j * k) % n) as f64 / n as f64;
            re += v * libm::cos(phase);
            im -= v * libm::sin(phase);
        }
        let weight = if j == 0 { 1.0 } else { 2.0 } / n as f64;
        for (k, o) in out.iter_mut().enumerate() {
            let phase = TAU * ((j * k) % n) as f64 / n as f64;
            *o += weight * (re * libm::cos(phase) - im * libm::sin(phase));
        }
    }
    out
}
