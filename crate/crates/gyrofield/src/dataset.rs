use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gyrofield_core::synth::SynthOptions;
use gyrofield_core::{
    build_igf, downsample_image, gen_gyro_trace, row_rotations, synth_pair, CameraIntrinsics,
    Error as CoreError, ImageBuffer, MotionField, MotionPattern, RowTiming, SynthPair, ValidMask,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::{self, DatasetSample, IntrinsicsRecord, PatternRecord, TimingRecord};

/// Relative weights of the three motion kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternMix {
    pub constant: f64,
    pub sinusoid: f64,
    pub smooth_noise: f64,
}

impl Default for PatternMix {
    fn default() -> Self {
        Self {
            constant: 1.0,
            sinusoid: 1.0,
            smooth_noise: 1.0,
        }
    }
}

impl FromStr for PatternMix {
    type Err = String;

    /// `"constant,sinusoid,smooth_noise"` weights, e.g. `1,1,1` or `0,1,0`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad weight {p:?}")))
            .collect::<std::result::Result<_, _>>()?;
        let [constant, sinusoid, smooth_noise] = parts[..] else {
            return Err(format!("expected 3 comma-separated weights, got {}", parts.len()));
        };
        let mix = Self {
            constant,
            sinusoid,
            smooth_noise,
        };
        mix.validate().map_err(|e| e.to_string())?;
        Ok(mix)
    }
}

impl PatternMix {
    fn validate(&self) -> Result<()> {
        let w = [self.constant, self.sinusoid, self.smooth_noise];
        if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || w.iter().sum::<f64>() <= 0.0 {
            return Err(Error::Usage(format!(
                "pattern weights must be non-negative with a positive sum, got {w:?}"
            )));
        }
        Ok(())
    }
}

/// Dataset generation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub count: usize,
    pub identity_fraction: f64,
    pub seed: u64,
    pub pattern_mix: PatternMix,
    /// Native geometry; sources are area-resized to it.
    pub intrinsics: CameraIntrinsics,
    pub readout_ns: i64,
    pub gyro_rate_hz: f64,
    pub trace_duration_ns: i64,
    /// Largest rotation accumulated over one readout.
    pub max_rotation_deg: f64,
    pub sinusoid_hz: (f64, f64),
    pub cutoff_hz: (f64, f64),
    pub norm_scale: f64,
    pub model_resolution: u32,
    /// Pattern redraws allowed when field inversion diverges.
    pub max_attempts: usize,
    /// Worker threads; 0 lets the pool decide. Output does not depend on it.
    pub workers: usize,
}

pub fn default_intrinsics() -> CameraIntrinsics {
    CameraIntrinsics::new(600.0, 600.0, 300.0, 400.0, 600, 800).expect("valid defaults")
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            count: 100,
            identity_fraction: 0.2,
            seed: 0,
            pattern_mix: PatternMix::default(),
            intrinsics: default_intrinsics(),
            readout_ns: 30_000_000,
            gyro_rate_hz: 200.0,
            trace_duration_ns: 200_000_000,
            max_rotation_deg: 3.0,
            sinusoid_hz: (1.0, 5.0),
            cutoff_hz: (5.0, 20.0),
            norm_scale: gyrofield_core::diffusion::DEFAULT_NORM_SCALE,
            model_resolution: 64,
            max_attempts: 16,
            workers: 0,
        }
    }
}

impl SynthConfig {
    /// Readout window centered in the trace, referenced to the first row.
    pub fn timing(&self) -> Result<RowTiming> {
        let t0 = (self.trace_duration_ns - self.readout_ns) / 2;
        if t0 < 0 {
            return Err(Error::Usage(format!(
                "trace of {} ns is shorter than the {} ns readout",
                self.trace_duration_ns, self.readout_ns
            )));
        }
        Ok(RowTiming::new(self.readout_ns, t0, 0)?)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.identity_fraction) {
            return Err(Error::Usage(format!(
                "identity fraction must lie in [0, 1], got {}",
                self.identity_fraction
            )));
        }
        if !(self.max_rotation_deg > 0.0 && self.max_rotation_deg.is_finite()) {
            return Err(Error::Usage("maximum rotation must be positive".into()));
        }
        for (lo, hi) in [self.sinusoid_hz, self.cutoff_hz] {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(Error::Usage(format!("invalid frequency range {lo}..{hi}")));
            }
        }
        if self.model_resolution == 0 || self.max_attempts == 0 {
            return Err(Error::Usage("model resolution and attempts must be ≥ 1".into()));
        }
        self.pattern_mix.validate()?;
        self.timing()?;
        Ok(())
    }

    /// Number of identity pairs, `round(count · fraction)`.
    pub fn identity_count(&self) -> usize {
        (self.count as f64 * self.identity_fraction).round() as usize
    }
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))
}

const IMAGE_EXTENSIONS: [&str; 1] = ["png"];

/// Decodable images in `src_dir`, sorted by file name. Unreadable files are
/// skipped with a warning.
pub fn usable_sources(src_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(src_dir)
        .map_err(|e| Error::io(src_dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    let usable: Vec<PathBuf> = paths
        .into_iter()
        .filter(|p| {
            let ext = p.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
            if !ext.is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.as_str())) {
                log::warn!("skipping {}: not a supported image", p.display());
                return false;
            }
            match io::read_image(p) {
                Ok(_) => true,
                Err(e) => {
                    log::warn!("skipping {e}");
                    false
                }
            }
        })
        .collect();
    if usable.is_empty() {
        return Err(Error::NoSources(src_dir.to_path_buf()));
    }
    Ok(usable)
}

const SUBDIRS: [&str; 8] = [
    "rs",
    "gs",
    "flow",
    "trace",
    "mask",
    "model/rs",
    "model/gs",
    "model/flow",
];

fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sample indices that become identity pairs, from a seeded shuffle.
fn identity_flags(cfg: &SynthConfig) -> Vec<bool> {
    let mut order: Vec<usize> = (0..cfg.count).collect();
    order.shuffle(&mut sample_rng(cfg.seed, 0));
    let mut flags = vec![false; cfg.count];
    for &i in &order[..cfg.identity_count().min(cfg.count)] {
        flags[i] = true;
    }
    flags
}

fn draw_pattern(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> MotionPattern {
    let mix = cfg.pattern_mix;
    let total = mix.constant + mix.sinusoid + mix.smooth_noise;
    let pick = rng.random::<f64>() * total;
    // Direction in the positive octant, peak rate up to the rotation cap.
    let dir: [f64; 3] = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal).abs());
    let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let cap = cfg.max_rotation_deg.to_radians() / (cfg.readout_ns as f64 * 1e-9);
    let rate = cap * rng.random_range(0.25..=1.0);
    let amplitude = dir.map(|d| d / norm * rate);
    if pick < mix.constant {
        MotionPattern::constant(amplitude)
    } else if pick < mix.constant + mix.sinusoid {
        let (lo, hi) = cfg.sinusoid_hz;
        MotionPattern::sinusoid(amplitude, rng.random_range(lo..=hi))
    } else {
        let (lo, hi) = cfg.cutoff_hz;
        let cutoff = rng.random_range(lo..=hi);
        MotionPattern::smooth_noise(amplitude, cutoff, rng.random())
    }
}

struct Rendered {
    pattern: MotionPattern,
    trace: gyrofield_core::GyroTrace,
    pair: SynthPair,
    model_field: MotionField,
}

fn render(
    cfg: &SynthConfig,
    src: &ImageBuffer,
    identity: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Rendered> {
    let k = &cfg.intrinsics;
    let m = cfg.model_resolution as usize;
    if identity {
        let pattern = MotionPattern::constant([0.0; 3]);
        let src = src.quantized();
        return Ok(Rendered {
            trace: gen_gyro_trace(&pattern, cfg.trace_duration_ns, cfg.gyro_rate_hz)?,
            pattern,
            pair: SynthPair {
                i_rs: src.clone(),
                i_gs: src,
                field: MotionField::zeros(k.width as usize, k.height as usize)?,
                mask: ValidMask::all_valid(k.width as usize, k.height as usize),
            },
            model_field: MotionField::zeros(m, m)?,
        });
    }
    let timing = cfg.timing()?;
    let opts = SynthOptions {
        quantize_rs: true,
        ..Default::default()
    };
    let mut last_err = None;
    for _ in 0..cfg.max_attempts {
        let pattern = draw_pattern(cfg, rng);
        let trace = gen_gyro_trace(&pattern, cfg.trace_duration_ns, cfg.gyro_rate_hz)?;
        match synth_pair(src, k, &trace, &timing, &opts) {
            Ok(pair) => {
                let mk = k.scaled(m as u32, m as u32)?;
                let rows = row_rotations(&trace, &timing, m)?;
                let (model_field, _) = build_igf(&mk, &rows, m, m)?;
                return Ok(Rendered {
                    pattern,
                    trace,
                    pair,
                    model_field,
                });
            }
            Err(e @ CoreError::NonContractive { .. }) => last_err = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    Err(last_err.expect("at least one attempt").into())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn generate_one(
    cfg: &SynthConfig,
    out_dir: &Path,
    sources: &[PathBuf],
    index: usize,
    identity: bool,
) -> Result<DatasetSample> {
    let mut rng = sample_rng(cfg.seed, index as u64 + 1);
    let src_path = &sources[rng.random_range(0..sources.len())];
    let k = &cfg.intrinsics;
    let src = downsample_image(&io::read_image(src_path)?, k.width as usize, k.height as usize)?;
    let r = render(cfg, &src, identity, &mut rng)?;
    let m = cfg.model_resolution as usize;
    let model_rs = downsample_image(&r.pair.i_rs, m, m)?.quantized();
    let model_gs = downsample_image(&r.pair.i_gs, m, m)?.quantized();

    let id = format!("{index:06}");
    let rel = |dir: &str, ext: &str| format!("{dir}/{id}.{ext}");
    let sample = DatasetSample {
        id: id.clone(),
        source: src_path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        rs_path: rel("rs", "png"),
        gs_path: rel("gs", "png"),
        flow_path: rel("flow", "flo"),
        trace_path: rel("trace", "csv"),
        mask_path: rel("mask", "png"),
        model_rs_path: rel("model/rs", "png"),
        model_gs_path: rel("model/gs", "png"),
        model_flow_path: rel("model/flow", "flo"),
        intrinsics: IntrinsicsRecord::from(k),
        timing: TimingRecord::from(&cfg.timing()?),
        pattern: PatternRecord::from(&r.pattern),
        is_identity_pair: identity,
        norm_scale: cfg.norm_scale,
        model_resolution: cfg.model_resolution,
    };
    let files: [(&str, Vec<u8>); 8] = [
        (&sample.rs_path, io::encode_image(&r.pair.i_rs)),
        (&sample.gs_path, io::encode_image(&r.pair.i_gs)),
        (&sample.flow_path, io::encode_flow(&r.pair.field)),
        (&sample.trace_path, io::format_trace(&r.trace)),
        (&sample.mask_path, io::encode_mask(&r.pair.mask)),
        (&sample.model_rs_path, io::encode_image(&model_rs)),
        (&sample.model_gs_path, io::encode_image(&model_gs)),
        (&sample.model_flow_path, io::encode_flow(&r.model_field)),
    ];
    for (rel, bytes) in &files {
        write_bytes(&out_dir.join(rel), bytes)?;
    }
    Ok(sample)
}

/// Renders `cfg.count` samples from the images in `src_dir` into `out_dir`
/// and writes `out_dir/manifest.jsonl`. Every byte written is a function of
/// the sources and `cfg` alone.
pub fn synth_dataset(src_dir: &Path, out_dir: &Path, cfg: &SynthConfig) -> Result<Vec<DatasetSample>> {
    cfg.validate()?;
    let sources = usable_sources(src_dir)?;
    for d in SUBDIRS {
        let p = out_dir.join(d);
        fs::create_dir_all(&p).map_err(|e| Error::io(&p, e))?;
    }
    let flags = identity_flags(cfg);
    let samples = thread_pool(cfg.workers)?.install(|| {
        (0..cfg.count)
            .into_par_iter()
            .map(|i| generate_one(cfg, out_dir, &sources, i, flags[i]))
            .collect::<Result<Vec<_>>>()
    })?;
    io::write_manifest(out_dir.join("manifest.jsonl"), &samples)?;
    Ok(samples)
}
