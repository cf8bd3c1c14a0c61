use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::schedule::NoiseSchedule;
use super::tensor::FieldTensor;
use crate::error::{Error, Result};
use crate::field::ImageBuffer;

/// A network (or oracle) that predicts the clean field x̂₀ from a noisy one.
///
/// Implementations must return a tensor of the same shape as `x_t` and be
/// deterministic for identical inputs. `condition` is `None` for the
/// unconditional branch of classifier-free guidance; models that need an
/// image there should substitute a uniform 0.5 gray.
pub trait Denoiser {
    fn predict_x0(
        &self,
        x_t: &FieldTensor,
        t: usize,
        condition: Option<&ImageBuffer>,
    ) -> FieldTensor;
}

impl<F> Denoiser for F
where
    F: Fn(&FieldTensor, usize, Option<&ImageBuffer>) -> FieldTensor,
{
    fn predict_x0(
        &self,
        x_t: &FieldTensor,
        t: usize,
        condition: Option<&ImageBuffer>,
    ) -> FieldTensor {
        self(x_t, t, condition)
    }
}

/// Noise implied by an x₀ prediction: `(x_t − √ᾱ_t·x̂₀) / √(1 − ᾱ_t)`.
pub fn predict_noise(
    x_t: &FieldTensor,
    x0_hat: &FieldTensor,
    t: usize,
    s: &NoiseSchedule,
) -> Result<FieldTensor> {
    s.check_step(t)?;
    let ab = s.alpha_bar()[t];
    let (a, b) = (libm::sqrt(ab), libm::sqrt(1.0 - ab));
    x_t.zip_map(x0_hat, |x, x0| (x - a * x0) / b)
}

/// One DDIM update from step `t` to `t_prev` given an x₀ prediction.
///
/// `t_prev = None` is the clean end of the chain (ᾱ = 1). With `eta = 0` the
/// update is deterministic; with `eta > 0` a standard-normal `noise` tensor
/// must be supplied.
pub fn ddim_step(
    x_t: &FieldTensor,
    x0_hat: &FieldTensor,
    t: usize,
    t_prev: Option<usize>,
    eta: f64,
    s: &NoiseSchedule,
    noise: Option<&FieldTensor>,
) -> Result<FieldTensor> {
    s.check_step(t)?;
    if let Some(tp) = t_prev {
        if tp >= t {
            return Err(Error::StepOrdering { t, t_prev: tp });
        }
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::InvalidArgument(alloc::format!(
            "eta must be non-negative, got {eta}"
        )));
    }
    if eta > 0.0 && noise.is_none() {
        return Err(Error::InvalidArgument("eta > 0 requires a noise tensor".into()));
    }
    let eps_hat = predict_noise(x_t, x0_hat, t, s)?;
    let ab_t = s.alpha_bar()[t];
    let ab_prev = s.alpha_bar_at(t_prev);
    let sigma = eta
        * libm::sqrt((1.0 - ab_prev) / (1.0 - ab_t))
        * libm::sqrt(1.0 - ab_t / ab_prev);
    let a = libm::sqrt(ab_prev);
    let b = libm::sqrt((1.0 - ab_prev - sigma * sigma).max(0.0));
    let mut out = x0_hat.zip_map(&eps_hat, |x0, e| a * x0 + b * e)?;
    if sigma > 0.0 {
        let n = noise.expect("checked above");
        out = out.zip_map(n, |x, z| x + sigma * z)?;
    }
    Ok(out)
}

/// Classifier-free guidance: `uncond + w·(cond − uncond)`; `w = 1` returns
/// `cond` unchanged.
pub fn cfg_combine(uncond: &FieldTensor, cond: &FieldTensor, w: f64) -> Result<FieldTensor> {
    uncond.check_same_shape(cond)?;
    if w == 1.0 {
        return Ok(cond.clone());
    }
    uncond.zip_map(cond, |u, c| u + w * (c - u))
}

/// Decreasing step indices visited by a `steps`-step sampler over a
/// `train_steps` chain: evenly spaced from `train_steps − 1` down to 0
/// (just `[train_steps − 1]` for a single step).
pub fn timestep_sequence(train_steps: usize, steps: usize) -> Result<Vec<usize>> {
    if steps == 0 || steps > train_steps {
        return Err(Error::OutOfRange {
            what: "sampling steps",
            value: steps as f64,
            min: 1.0,
            max: train_steps as f64,
        });
    }
    if steps == 1 {
        return Ok(alloc::vec![train_steps - 1]);
    }
    let (last, n) = (train_steps - 1, steps - 1);
    // round(last·(n − i)/n) in integers, half up.
    Ok((0..steps)
        .map(|i| (2 * last * (n - i) + n) / (2 * n))
        .collect())
}

/// Sampling knobs; the defaults are 8 deterministic DDIM steps with pure
/// conditional guidance on a 2-channel field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub steps: usize,
    pub eta: f64,
    /// Guidance weight `w`.
    pub guidance: f64,
    pub seed: u64,
    /// Channels of the sampled tensor; its height and width follow the
    /// condition image.
    pub channels: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            steps: 8,
            eta: 0.0,
            guidance: 1.0,
            seed: 0,
            channels: 2,
        }
    }
}

fn normal_tensor(rng: &mut ChaCha8Rng, shape: (usize, usize, usize)) -> FieldTensor {
    let n = shape.0 * shape.1 * shape.2;
    let data: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    FieldTensor::new(shape.0, shape.1, shape.2, data).expect("normal draws are finite")
}

/// Draws a field for `condition` by DDIM from seeded unit-normal noise.
///
/// Each call owns its random stream, so results depend only on
/// `(denoiser, condition, config)`.
pub fn sample_field<D: Denoiser + ?Sized>(
    den: &D,
    condition: &ImageBuffer,
    cfg: &SamplerConfig,
    s: &NoiseSchedule,
) -> Result<FieldTensor> {
    let timesteps = timestep_sequence(s.steps(), cfg.steps)?;
    let shape = (cfg.channels, condition.height(), condition.width());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = normal_tensor(&mut rng, shape);
    let check = |out: &FieldTensor| -> Result<()> {
        if out.shape() != shape {
            return Err(Error::Contract(alloc::format!(
                "denoiser returned shape {:?} for input {:?}",
                out.shape(),
                shape
            )));
        }
        if !out.data().iter().all(|v| v.is_finite()) {
            return Err(Error::Contract("denoiser returned non-finite values".into()));
        }
        Ok(())
    };
    for (i, &t) in timesteps.iter().enumerate() {
        let cond = den.predict_x0(&x, t, Some(condition));
        check(&cond)?;
        let x0_hat = if cfg.guidance != 1.0 {
            let uncond = den.predict_x0(&x, t, None);
            check(&uncond)?;
            cfg_combine(&uncond, &cond, cfg.guidance)?
        } else {
            cond
        };
        let t_prev = timesteps.get(i + 1).copied();
        let noise = (cfg.eta > 0.0).then(|| normal_tensor(&mut rng, shape));
        x = ddim_step(&x, &x0_hat, t, t_prev, cfg.eta, s, noise.as_ref())?;
    }
    Ok(x)
}
