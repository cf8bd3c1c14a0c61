mod camera;
pub(crate) mod mat3;
mod rotation;
mod trace;

pub use camera::{apply_homography, homography_from_rotation, CameraIntrinsics, Homography};
pub use mat3::Mat3;
pub use rotation::{rodrigues, slerp, Rotation};
pub use trace::{integrate_trace, GyroSample, GyroTrace, TraceIntegrator};
