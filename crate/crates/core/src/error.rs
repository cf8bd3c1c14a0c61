use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the core operations.
///
/// Variants map one-to-one onto the failure classes callers need to tell
/// apart (the CLI turns them into distinct exit codes).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is non-finite, non-positive or otherwise malformed.
    InvalidArgument(String),
    /// A scalar argument lies outside its permitted interval.
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    /// A gyro trace violates its ordering or length invariants.
    InvalidTrace(String),
    /// The trace does not cover the requested capture window.
    Coverage {
        needed_ns: i64,
        duration_ns: i64,
    },
    /// Buffers that must agree in shape do not.
    Shape {
        expected: (usize, usize, usize),
        found: (usize, usize, usize),
    },
    /// A homography sent a point to infinity (|w| too small).
    PointAtInfinity,
    /// Fixed-point inversion of a motion field kept growing.
    NonContractive { iteration: usize },
    /// DDIM steps must move towards t = 0.
    StepOrdering { t: usize, t_prev: usize },
    /// No pixel survived the validity mask.
    DegenerateMask,
    /// The image is too small for the requested operation.
    TooSmall {
        width: usize,
        height: usize,
        min: usize,
    },
    /// A pluggable component (e.g. a denoiser) broke its contract.
    Contract(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::OutOfRange {
                what,
                value,
                min,
                max,
            } => write!(f, "{what} = {value} outside [{min}, {max}]"),
            Error::InvalidTrace(msg) => write!(f, "invalid gyro trace: {msg}"),
            Error::Coverage {
                needed_ns,
                duration_ns,
            } => write!(
                f,
                "gyro trace covers {duration_ns} ns but {needed_ns} ns are needed"
            ),
            Error::Shape { expected, found } => write!(
                f,
                "shape mismatch: expected {}x{}x{}, found {}x{}x{}",
                expected.0, expected.1, expected.2, found.0, found.1, found.2
            ),
            Error::PointAtInfinity => f.write_str("homography maps point to infinity"),
            Error::NonContractive { iteration } => write!(
                f,
                "field inversion diverged (update grew for 3 iterations, stopped at {iteration})"
            ),
            Error::StepOrdering { t, t_prev } => {
                write!(f, "ddim step must decrease: t = {t}, t_prev = {t_prev}")
            }
            Error::DegenerateMask => f.write_str("validity mask selects no pixels"),
            Error::TooSmall { width, height, min } => {
                write!(f, "image {width}x{height} smaller than required {min}x{min}")
            }
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
