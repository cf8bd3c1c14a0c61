mod buffers;
mod igf;
mod invert;
mod remap;
mod resize;

pub use buffers::{quantize_unit, ImageBuffer, MotionField, ValidMask};
pub use igf::{build_igf, row_rotations, RowTiming};
pub use invert::{composition_residual, invert_field, InvertOptions};
pub use remap::{remap, remap_mask};
pub use resize::{downsample_image, upsample_field};
