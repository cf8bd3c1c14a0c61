use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{ImageBuffer, MotionField, ValidMask};

/// PSNR reported for identical inputs.
pub const PSNR_CAP_DB: f64 = 99.0;

/// Side of the square SSIM window.
pub const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

fn check_images(a: &ImageBuffer, b: &ImageBuffer, mask: &ValidMask) -> Result<()> {
    if (a.width(), a.height(), a.channels()) != (b.width(), b.height(), b.channels()) {
        return Err(Error::Shape {
            expected: (a.channels(), a.height(), a.width()),
            found: (b.channels(), b.height(), b.width()),
        });
    }
    mask.check_dims(a.width(), a.height())
}

/// Peak signal-to-noise ratio in dB for `[0, 1]` images, over masked pixels
/// and all channels; capped at [`PSNR_CAP_DB`].
pub fn psnr(a: &ImageBuffer, b: &ImageBuffer, mask: &ValidMask) -> Result<f64> {
    check_images(a, b, mask)?;
    let ch = a.channels();
    let (da, db) = (a.data(), b.data());
    let mut sum = 0.0;
    let mut n = 0usize;
    for (i, _) in mask.data().iter().enumerate().filter(|(_, &v)| v) {
        for c in 0..ch {
            let d = da[i * ch + c] as f64 - db[i * ch + c] as f64;
            sum += d * d;
        }
        n += ch;
    }
    if n == 0 {
        return Err(Error::DegenerateMask);
    }
    let mse = sum / n as f64;
    if mse == 0.0 {
        return Ok(PSNR_CAP_DB);
    }
    Ok((-10.0 * libm::log10(mse)).min(PSNR_CAP_DB))
}

fn gaussian_taps() -> [f64; SSIM_WINDOW] {
    let mut taps = [0.0; SSIM_WINDOW];
    let r = (SSIM_WINDOW / 2) as f64;
    for (i, t) in taps.iter_mut().enumerate() {
        let d = i as f64 - r;
        *t = libm::exp(-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA));
    }
    let s: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= s);
    taps
}

/// Single-scale SSIM on luma with an 11×11 Gaussian window (σ = 1.5),
/// `K1 = 0.01`, `K2 = 0.03` and unit dynamic range, averaged over the
/// windows that fit inside the image and whose center pixel is masked.
pub fn ssim(a: &ImageBuffer, b: &ImageBuffer, mask: &ValidMask) -> Result<f64> {
    check_images(a, b, mask)?;
    let (w, h) = (a.width(), a.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            min: SSIM_WINDOW,
        });
    }
    let (la, lb) = (a.luma(), b.luma());
    let taps = gaussian_taps();
    let r = SSIM_WINDOW / 2;
    let ow = w - 2 * r;

    // Horizontal pass over the five moment images.
    let mut horiz = vec![[0.0f64; 5]; h * ow];
    for y in 0..h {
        for x in 0..ow {
            let mut acc = [0.0; 5];
            for (k, &t) in taps.iter().enumerate() {
                let i = y * w + x + k;
                let (p, q) = (la[i], lb[i]);
                acc[0] += t * p;
                acc[1] += t * q;
                acc[2] += t * p * p;
                acc[3] += t * q * q;
                acc[4] += t * p * q;
            }
            horiz[y * ow + x] = acc;
        }
    }

    let c1 = (SSIM_K1 * 1.0) * (SSIM_K1 * 1.0);
    let c2 = (SSIM_K2 * 1.0) * (SSIM_K2 * 1.0);
    let mut total = 0.0;
    let mut count = 0usize;
    for cy in r..h - r {
        for cx in r..w - r {
            if !mask.get(cx, cy) {
                continue;
            }
            let x = cx - r;
            let mut m = [0.0; 5];
            for (k, &t) in taps.iter().enumerate() {
                let row = &horiz[(cy - r + k) * ow + x];
                for j in 0..5 {
                    m[j] += t * row[j];
                }
            }
            let (mu_a, mu_b) = (m[0], m[1]);
            let var_a = m[2] - mu_a * mu_a;
            let var_b = m[3] - mu_b * mu_b;
            let cov = m[4] - mu_a * mu_b;
            total += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2))
                / ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::DegenerateMask);
    }
    Ok(total / count as f64)
}

/// Mean endpoint error in pixels over masked pixels.
pub fn epe(pred: &MotionField, gt: &MotionField, mask: &ValidMask) -> Result<f64> {
    if (pred.width(), pred.height()) != (gt.width(), gt.height()) {
        return Err(Error::Shape {
            expected: (2, gt.height(), gt.width()),
            found: (2, pred.height(), pred.width()),
        });
    }
    mask.check_dims(gt.width(), gt.height())?;
    let (p, g) = (pred.data(), gt.data());
    let errors: Vec<f64> = mask
        .data()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v)
        .map(|(i, _)| {
            let dx = p[2 * i] as f64 - g[2 * i] as f64;
            let dy = p[2 * i + 1] as f64 - g[2 * i + 1] as f64;
            libm::sqrt(dx * dx + dy * dy)
        })
        .collect();
    if errors.is_empty() {
        return Err(Error::DegenerateMask);
    }
    Ok(errors.iter().sum::<f64>() / errors.len() as f64)
}
