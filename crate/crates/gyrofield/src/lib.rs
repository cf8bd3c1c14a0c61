//! # `gyrofield`
//!
//! File formats, dataset synthesis, evaluation and the command-line front
//! end for [`gyrofield_core`].
//!
//! - [`io`]: Middlebury `.flo` fields, `t_ns,wx,wy,wz` gyro CSV, intrinsics
//!   JSON, 8-bit PNG images and masks, JSONL manifests and scheduler test
//!   vectors.
//! - [`dataset`]: parallel, seed-deterministic generation of RS/GS/field
//!   triplets.
//! - [`eval`]: PSNR/SSIM/EPE over a manifest for a pluggable predictor.
//! - [`cli`]: the `gyrofield` binary.

pub mod cli;
pub mod dataset;
mod error;
pub mod eval;
pub mod io;

pub use error::{Error, Result};
