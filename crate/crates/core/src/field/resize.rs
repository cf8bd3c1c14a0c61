use alloc::vec::Vec;

use super::buffers::{ImageBuffer, MotionField};
use crate::error::{Error, Result};

/// Resizes a field to `new_w × new_h` and rescales its displacements to
/// target-grid pixels (`dx · new_w/old_w`, `dy · new_h/old_h`).
///
/// Bilinear with pixel-center alignment: target pixel `x'` reads source
/// position `(x' + ½)·old_w/new_w − ½`, clamped to the border.
pub fn upsample_field(g: &MotionField, new_w: usize, new_h: usize) -> Result<MotionField> {
    if new_w == 0 || new_h == 0 {
        return Err(Error::InvalidArgument("target size must be ≥ 1".into()));
    }
    let (old_w, old_h) = (g.width(), g.height());
    let rx = old_w as f64 / new_w as f64;
    let ry = old_h as f64 / new_h as f64;
    let sx = new_w as f64 / old_w as f64;
    let sy = new_h as f64 / old_h as f64;
    let mut data = Vec::with_capacity(new_w * new_h * 2);
    for y in 0..new_h {
        let src_y = (y as f64 + 0.5) * ry - 0.5;
        for x in 0..new_w {
            let src_x = (x as f64 + 0.5) * rx - 0.5;
            let d = g.sample_clamped(src_x, src_y);
            data.push((d[0] * sx) as f32);
            data.push((d[1] * sy) as f32);
        }
    }
    MotionField::new(new_w, new_h, data)
}

/// Source pixels and their coverage weights for each target pixel along one
/// axis of an area-average resize.
fn area_weights(n_in: usize, n_out: usize) -> Vec<Vec<(usize, f64)>> {
    let scale = n_in as f64 / n_out as f64;
    (0..n_out)
        .map(|i| {
            let lo = i as f64 * scale;
            let hi = (i + 1) as f64 * scale;
            let first = libm::floor(lo) as usize;
            let last = (libm::ceil(hi) as usize).min(n_in);
            (first..last)
                .filter_map(|j| {
                    let overlap = hi.min((j + 1) as f64) - lo.max(j as f64);
                    (overlap > 0.0).then_some((j, overlap / scale))
                })
                .collect()
        })
        .collect()
}

/// Area-average resize (box filter with fractional coverage).
pub fn downsample_image(img: &ImageBuffer, new_w: usize, new_h: usize) -> Result<ImageBuffer> {
    if new_w == 0 || new_h == 0 {
        return Err(Error::InvalidArgument("target size must be ≥ 1".into()));
    }
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    if (new_w, new_h) == (w, h) {
        return Ok(img.clone());
    }
    let wx = area_weights(w, new_w);
    let wy = area_weights(h, new_h);
    let src = img.data();

    // Horizontal pass into f64 rows, then vertical.
    let mut tmp = alloc::vec![0.0f64; h * new_w * ch];
    for y in 0..h {
        for (x, taps) in wx.iter().enumerate() {
            for c in 0..ch {
                tmp[(y * new_w + x) * ch + c] = taps
                    .iter()
                    .map(|&(j, wt)| wt * src[(y * w + j) * ch + c] as f64)
                    .sum();
            }
        }
    }
    let mut out = Vec::with_capacity(new_w * new_h * ch);
    for taps in &wy {
        for x in 0..new_w {
            for c in 0..ch {
                let v: f64 = taps
                    .iter()
                    .map(|&(j, wt)| wt * tmp[(j * new_w + x) * ch + c])
                    .sum();
                out.push((v as f32).clamp(0.0, 1.0));
            }
        }
    }
    ImageBuffer::new(new_w, new_h, ch, out)
}
