use super::tensor::{denormalize_field, FieldTensor};
use crate::error::{Error, Result};
use crate::field::{remap, ImageBuffer};

/// Mean squared error over all elements.
pub fn loss_mse(x0_hat: &FieldTensor, x0: &FieldTensor) -> Result<f64> {
    x0_hat.check_same_shape(x0)?;
    if x0.is_empty() {
        return Err(Error::InvalidArgument("empty tensors".into()));
    }
    let sum: f64 = x0_hat
        .data()
        .iter()
        .zip(x0.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / x0.len() as f64)
}

/// Mean absolute difference between `i_gs` and `i_rs` warped by the
/// predicted field, over the pixels the warp could fill.
///
/// `x0_hat` is a normalized field at the images' resolution; it is scaled
/// back to pixels by `norm_scale` before warping.
pub fn loss_photometric(
    x0_hat: &FieldTensor,
    i_rs: &ImageBuffer,
    i_gs: &ImageBuffer,
    norm_scale: f64,
) -> Result<f64> {
    if (i_rs.width(), i_rs.height(), i_rs.channels())
        != (i_gs.width(), i_gs.height(), i_gs.channels())
    {
        return Err(Error::Shape {
            expected: (i_gs.channels(), i_gs.height(), i_gs.width()),
            found: (i_rs.channels(), i_rs.height(), i_rs.width()),
        });
    }
    let g = denormalize_field(x0_hat, norm_scale)?;
    let (warped, mask) = remap(i_rs, &g)?;
    let ch = i_gs.channels();
    let mut sum = 0.0;
    let mut n = 0usize;
    for (i, _) in mask.data().iter().enumerate().filter(|(_, &v)| v) {
        for c in 0..ch {
            let k = i * ch + c;
            sum += libm::fabs(warped.data()[k] as f64 - i_gs.data()[k] as f64);
        }
        n += ch;
    }
    if n == 0 {
        return Err(Error::DegenerateMask);
    }
    Ok(sum / n as f64)
}

/// Dynamically weighted total `ℓ_mse + (|ℓ_mse| / |ℓ_pl|)·ℓ_pl`.
///
/// The ratio is a constant with respect to gradients, so a trainer should
/// detach it; its value is `2·ℓ_mse` whenever `ℓ_pl` is nonzero. Below
/// `1e-12` the photometric weight is taken as 0.
pub fn loss_overall(l_mse: f64, l_pl: f64) -> Result<f64> {
    if !(l_mse >= 0.0 && l_pl >= 0.0) || !l_mse.is_finite() || !l_pl.is_finite() {
        return Err(Error::InvalidArgument(alloc::format!(
            "losses must be finite and non-negative, got {l_mse}, {l_pl}"
        )));
    }
    if l_pl < 1e-12 {
        return Ok(l_mse);
    }
    let weight = libm::fabs(l_mse) / libm::fabs(l_pl);
    Ok(l_mse + weight * l_pl)
}
