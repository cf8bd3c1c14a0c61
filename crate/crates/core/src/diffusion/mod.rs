mod loss;
mod sampler;
mod schedule;
mod tensor;

pub use loss::{loss_mse, loss_overall, loss_photometric};
pub use sampler::{
    cfg_combine, ddim_step, predict_noise, sample_field, timestep_sequence, Denoiser,
    SamplerConfig,
};
pub use schedule::{make_schedule, NoiseSchedule, DEFAULT_BETA_END, DEFAULT_BETA_START, DEFAULT_STEPS};
pub use tensor::{denormalize_field, normalize_field, q_sample, FieldTensor, DEFAULT_NORM_SCALE};
