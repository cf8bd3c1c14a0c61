use crate::error::{Error, Result};
use crate::field::{
    build_igf, invert_field, remap, remap_mask, row_rotations, ImageBuffer, InvertOptions,
    MotionField, RowTiming, ValidMask,
};
use crate::geometry::{CameraIntrinsics, GyroTrace};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SynthOptions {
    pub invert: InvertOptions,
    /// Snap the rolling-shutter image onto the 8-bit grid before deriving
    /// the global-shutter image from it, so that both survive a PNG round
    /// trip with the warp relation intact.
    pub quantize_rs: bool,
}

/// A rolling-shutter image, its corrected counterpart and the field relating
/// them: `i_gs == remap(i_rs, field)` holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthPair {
    pub i_rs: ImageBuffer,
    pub i_gs: ImageBuffer,
    pub field: MotionField,
    /// Pixels of `i_gs` that carry source content.
    pub mask: ValidMask,
}

/// Renders a rolling-shutter view of `src` under `trace` and the
/// corresponding corrected image.
///
/// The rolling-shutter image is `src` warped by the inverse field; the
/// corrected image is then produced from it with the forward field rather
/// than copied from `src`, so the pair stays exactly consistent even where
/// the inversion is imperfect.
pub fn synth_pair(
    src: &ImageBuffer,
    k: &CameraIntrinsics,
    trace: &GyroTrace,
    timing: &RowTiming,
    opts: &SynthOptions,
) -> Result<SynthPair> {
    let (w, h) = (src.width(), src.height());
    if (w, h) != (k.width as usize, k.height as usize) {
        return Err(Error::Shape {
            expected: (src.channels(), k.height as usize, k.width as usize),
            found: (src.channels(), h, w),
        });
    }
    let rows = row_rotations(trace, timing, h)?;
    let (field, field_mask) = build_igf(k, &rows, w, h)?;
    let inverse = invert_field(&field, opts.invert.iters, opts.invert.tol)?;
    let (mut i_rs, rs_mask) = remap(src, &inverse)?;
    if opts.quantize_rs {
        i_rs = i_rs.quantized();
    }
    let (i_gs, gs_mask) = remap(&i_rs, &field)?;
    let mask = rs_mask
        .and(&gs_mask)?
        .and(&remap_mask(&rs_mask, &field)?)?
        .and(&field_mask)?;
    Ok(SynthPair {
        i_rs,
        i_gs,
        field,
        mask,
    })
}
