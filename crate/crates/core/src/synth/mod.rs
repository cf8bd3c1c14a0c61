mod pair;
mod pattern;

pub use pair::{synth_pair, SynthOptions, SynthPair};
pub use pattern::{gen_gyro_trace, MotionPattern, PatternKind};
