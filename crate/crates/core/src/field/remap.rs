use alloc::vec::Vec;

use super::buffers::{ImageBuffer, MotionField, ValidMask};
use crate::error::{Error, Result};

/// Bilinear footprint of one sample position.
struct Tap {
    x0: usize,
    y0: usize,
    x1: usize,
    y1: usize,
    fx: f64,
    fy: f64,
}

/// `None` unless the position lies inside `[0, W−1] × [0, H−1]`. A position
/// exactly on the last row or column collapses onto it (the outer corner has
/// zero weight), which keeps integer positions exact.
#[inline]
fn tap(sx: f64, sy: f64, width: usize, height: usize) -> Option<Tap> {
    if !(sx >= 0.0 && sx <= (width - 1) as f64 && sy >= 0.0 && sy <= (height - 1) as f64) {
        return None;
    }
    let x0 = libm::floor(sx) as usize;
    let y0 = libm::floor(sy) as usize;
    Some(Tap {
        x0,
        y0,
        x1: (x0 + 1).min(width - 1),
        y1: (y0 + 1).min(height - 1),
        fx: sx - x0 as f64,
        fy: sy - y0 as f64,
    })
}

fn check_dims(img_w: usize, img_h: usize, g: &MotionField) -> Result<()> {
    if (img_w, img_h) != (g.width(), g.height()) {
        return Err(Error::Shape {
            expected: (2, img_h, img_w),
            found: (2, g.height(), g.width()),
        });
    }
    Ok(())
}

/// Backward warp: `out(p) = img(p + g(p))`, bilinear.
///
/// Positions outside the image produce 0 and a cleared mask bit.
pub fn remap(img: &ImageBuffer, g: &MotionField) -> Result<(ImageBuffer, ValidMask)> {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    check_dims(w, h, g)?;
    let src = img.data();
    let mut out = Vec::with_capacity(w * h * ch);
    let mut mask = ValidMask::all_valid(w, h);
    for y in 0..h {
        for x in 0..w {
            let d = g.get(x, y);
            let sx = x as f64 + d[0] as f64;
            let sy = y as f64 + d[1] as f64;
            let Some(t) = tap(sx, sy, w, h) else {
                out.extend(core::iter::repeat_n(0.0, ch));
                mask.set(x, y, false);
                continue;
            };
            let i00 = (t.y0 * w + t.x0) * ch;
            let i10 = (t.y0 * w + t.x1) * ch;
            let i01 = (t.y1 * w + t.x0) * ch;
            let i11 = (t.y1 * w + t.x1) * ch;
            for c in 0..ch {
                let top = (1.0 - t.fx) * src[i00 + c] as f64 + t.fx * src[i10 + c] as f64;
                let bottom = (1.0 - t.fx) * src[i01 + c] as f64 + t.fx * src[i11 + c] as f64;
                let v = (1.0 - t.fy) * top + t.fy * bottom;
                out.push((v as f32).clamp(0.0, 1.0));
            }
        }
    }
    Ok((ImageBuffer::from_raw_unchecked(w, h, ch, out), mask))
}

/// Pulls a validity mask through the same backward warp as [`remap`]: an
/// output pixel is valid when its sample position is in range and every
/// bilinear corner with nonzero weight is valid in `mask`.
pub fn remap_mask(mask: &ValidMask, g: &MotionField) -> Result<ValidMask> {
    let (w, h) = (mask.width(), mask.height());
    check_dims(w, h, g)?;
    let mut out = ValidMask::all_valid(w, h);
    for y in 0..h {
        for x in 0..w {
            let d = g.get(x, y);
            let ok = match tap(x as f64 + d[0] as f64, y as f64 + d[1] as f64, w, h) {
                None => false,
                Some(t) => {
                    let wx = [1.0 - t.fx, t.fx];
                    let wy = [1.0 - t.fy, t.fy];
                    let xs = [t.x0, t.x1];
                    let ys = [t.y0, t.y1];
                    (0..2).all(|j| {
                        (0..2).all(|i| wx[i] * wy[j] == 0.0 || mask.get(xs[i], ys[j]))
                    })
                }
            };
            out.set(x, y, ok);
        }
    }
    Ok(out)
}
