use alloc::vec;
use alloc::vec::Vec;

use super::buffers::MotionField;
use crate::error::{Error, Result};

/// Fixed-point settings for [`invert_field`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvertOptions {
    pub iters: usize,
    /// Stop once the largest per-pixel update (pixels) drops below this.
    pub tol: f64,
}

impl Default for InvertOptions {
    fn default() -> Self {
        Self {
            iters: 10,
            tol: 1e-3,
        }
    }
}

/// Numerical inverse of a backward-warp field.
///
/// Solves `v(p) = −g(p + v(p))` per pixel by fixed-point iteration from
/// `v = 0`, sampling `g` bilinearly (clamped at the border). The result
/// undoes `g`: warping with the inverse and then with `g` returns to the
/// starting grid up to the composition residual.
///
/// Fails with [`Error::NonContractive`] when the largest update grows for
/// three consecutive iterations.
pub fn invert_field(g: &MotionField, iters: usize, tol: f64) -> Result<MotionField> {
    if iters == 0 {
        return Err(Error::InvalidArgument("iters must be ≥ 1".into()));
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument("tol must be non-negative".into()));
    }
    let (w, h) = (g.width(), g.height());
    let mut v = vec![0.0f64; w * h * 2];
    let mut prev_update = f64::INFINITY;
    let mut growth = 0;
    for it in 0..iters {
        let mut max_update = 0.0f64;
        for y in 0..h {
            for x in 0..w {
                let i = (y * w + x) * 2;
                let s = g.sample_clamped(x as f64 + v[i], y as f64 + v[i + 1]);
                let (nx, ny) = (-s[0], -s[1]);
                let du = libm::hypot(nx - v[i], ny - v[i + 1]);
                max_update = max_update.max(du);
                v[i] = nx;
                v[i + 1] = ny;
            }
        }
        if !max_update.is_finite() {
            return Err(Error::NonContractive { iteration: it + 1 });
        }
        if max_update > prev_update {
            growth += 1;
            if growth >= 3 {
                return Err(Error::NonContractive { iteration: it + 1 });
            }
        } else {
            growth = 0;
        }
        prev_update = max_update;
        if max_update < tol {
            break;
        }
    }
    let data: Vec<f32> = v.iter().map(|&c| c as f32).collect();
    MotionField::new(w, h, data)
}

/// Mean of `|inv(p) + g(p + inv(p))|` over the grid.
pub fn composition_residual(g: &MotionField, inv: &MotionField) -> f64 {
    let (w, h) = (g.width(), g.height());
    let mut sum = 0.0;
    for y in 0..h {
        for x in 0..w {
            let d = inv.get(x, y);
            let s = g.sample_clamped(x as f64 + d[0] as f64, y as f64 + d[1] as f64);
            sum += libm::hypot(d[0] as f64 + s[0], d[1] as f64 + s[1]);
        }
    }
    sum / (w * h) as f64
}
