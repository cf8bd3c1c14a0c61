#![no_std]

//! # `gyrofield-core`
//!
//! Rolling-shutter geometry driven by gyroscope traces: integrate angular
//! velocity into per-row camera rotations, turn them into a dense per-pixel
//! correction field, and warp images with it. Alongside the geometry sit the
//! pieces needed to learn such fields from a single image: a linear-schedule
//! DDIM sampler with x₀ prediction, classifier-free guidance, the training
//! losses, and PSNR/SSIM/EPE metrics with validity masks.
//!
//! Everything here is pure computation over owned buffers and only needs
//! `alloc`. File formats, dataset assembly and the CLI live in the
//! `gyrofield` crate.

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;

/// SO(3) rotations, gyro traces, intrinsics and rotation-only homographies.
pub mod geometry;

/// Images, motion fields and the warping kernels that operate on them.
pub mod field;

/// Noise schedules, forward diffusion, DDIM sampling, guidance and losses.
pub mod diffusion;

/// Synthetic gyro traces and self-consistent RS/GS training pairs.
pub mod synth;

/// PSNR, SSIM and endpoint error over validity masks.
pub mod metrics;

pub use error::{Error, Result};

pub use diffusion::{
    cfg_combine, ddim_step, denormalize_field, loss_mse, loss_overall, loss_photometric,
    make_schedule, normalize_field, q_sample, sample_field, timestep_sequence, Denoiser,
    FieldTensor, NoiseSchedule,
};
pub use field::{
    build_igf, downsample_image, invert_field, remap, row_rotations, upsample_field, ImageBuffer,
    MotionField, RowTiming, ValidMask,
};
pub use geometry::{
    apply_homography, homography_from_rotation, integrate_trace, rodrigues, slerp,
    CameraIntrinsics, GyroSample, GyroTrace, Homography, Rotation,
};
pub use metrics::{epe, psnr, ssim};
pub use synth::{gen_gyro_trace, synth_pair, MotionPattern, PatternKind, SynthPair};
