//! Image and flow quality metrics over validity masks.
//!
//! All three metrics read only the pixels selected by the mask (SSIM reads
//! the windows centered on them), so black borders left by a warp never
//! enter the score.

mod quality;
mod stats;

pub use quality::{epe, psnr, ssim, PSNR_CAP_DB, SSIM_WINDOW};
pub use stats::MeanStd;
