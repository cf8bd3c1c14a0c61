use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gyrofield_core::diffusion::{DEFAULT_BETA_END, DEFAULT_BETA_START, DEFAULT_NORM_SCALE, DEFAULT_STEPS};
use gyrofield_core::synth::SynthOptions;
use gyrofield_core::field::InvertOptions;
use gyrofield_core::{build_igf, invert_field, remap, row_rotations, synth_pair, upsample_field, Error as CoreError, RowTiming};

use crate::dataset::{self, PatternMix, SynthConfig};
use crate::error::{Error, Result};
use crate::eval::{self, Predictor};
use crate::io;

#[derive(Debug, Parser)]
#[command(name = "gyrofield", version, about = "Gyro-driven rolling-shutter correction fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the correction field for a gyro trace.
    Igf(IgfArgs),
    /// Render a rolling-shutter image from a still and a gyro trace.
    Simulate(SimulateArgs),
    /// Warp a rolling-shutter image with a correction field.
    Correct(CorrectArgs),
    /// Numerically invert a correction field.
    InvertField(InvertArgs),
    /// Generate a synthetic dataset with a manifest.
    Synth(SynthArgs),
    /// Score a predictor on a dataset.
    Eval(EvalArgs),
    /// Write scheduler test vectors as JSON.
    ExportTestvectors(TestvecArgs),
}

#[derive(Debug, Args)]
pub struct TimingArgs {
    /// Time from the first to the last row, ns.
    #[arg(long, default_value_t = 30_000_000)]
    pub readout_ns: i64,
    /// Capture time of the first row within the trace, ns.
    #[arg(long, default_value_t = 0)]
    pub t0_ns: i64,
    #[arg(long, default_value_t = 0)]
    pub reference_row: u32,
}

impl TimingArgs {
    fn timing(&self) -> Result<RowTiming> {
        Ok(RowTiming::new(self.readout_ns, self.t0_ns, self.reference_row)?)
    }
}

#[derive(Debug, Args)]
pub struct InvertFlags {
    #[arg(long, default_value_t = InvertOptions::default().iters)]
    pub iters: usize,
    #[arg(long, default_value_t = InvertOptions::default().tol)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct IgfArgs {
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long)]
    pub intrinsics: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the field's validity mask as PNG.
    #[arg(long)]
    pub mask_out: Option<PathBuf>,
    #[command(flatten)]
    pub timing: TimingArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub src: PathBuf,
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long)]
    pub intrinsics: PathBuf,
    /// Rolling-shutter PNG.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub gs_out: Option<PathBuf>,
    #[arg(long)]
    pub flow_out: Option<PathBuf>,
    #[arg(long)]
    pub mask_out: Option<PathBuf>,
    #[command(flatten)]
    pub timing: TimingArgs,
    #[command(flatten)]
    pub invert: InvertFlags,
}

#[derive(Debug, Args)]
pub struct CorrectArgs {
    #[arg(long)]
    pub rs: PathBuf,
    /// Field in pixels; resampled to the image size when smaller.
    #[arg(long)]
    pub flow: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub mask_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[arg(long)]
    pub flow: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub invert: InvertFlags,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub src: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0.2)]
    pub identity_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Weights for constant, sinusoid and smooth-noise motion.
    #[arg(long, default_value = "1,1,1")]
    pub pattern_mix: PatternMix,
    /// Native geometry; 600×800 with a 600 px focal length when omitted.
    #[arg(long)]
    pub intrinsics: Option<PathBuf>,
    #[arg(long, default_value_t = 30_000_000)]
    pub readout_ns: i64,
    #[arg(long, default_value_t = 200.0)]
    pub gyro_rate_hz: f64,
    #[arg(long, default_value_t = 200_000_000)]
    pub trace_duration_ns: i64,
    #[arg(long, default_value_t = 3.0)]
    pub max_rotation_deg: f64,
    #[arg(long, default_value_t = DEFAULT_NORM_SCALE)]
    pub norm_scale: f64,
    #[arg(long, default_value_t = 64)]
    pub model_resolution: u32,
    /// Worker threads (0 = all cores).
    #[arg(long, env = "GYROFIELD_WORKERS", default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// `oracle`, `zero` or `flows:DIR`.
    #[arg(long, default_value = "oracle")]
    pub predictor: Predictor,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    /// Report JSON; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, env = "GYROFIELD_WORKERS", default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct TestvecArgs {
    #[arg(long)]
    pub out: PathBuf,
    /// Training steps.
    #[arg(long = "T", default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, default_value_t = DEFAULT_BETA_START)]
    pub beta_start: f64,
    #[arg(long, default_value_t = DEFAULT_BETA_END)]
    pub beta_end: f64,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Igf(a) => {
            let trace = io::read_trace(&a.trace)?;
            let k = io::read_intrinsics(&a.intrinsics)?;
            let (w, h) = (k.width as usize, k.height as usize);
            let rows = row_rotations(&trace, &a.timing.timing()?, h)?;
            let (g, mask) = build_igf(&k, &rows, w, h)?;
            io::write_flow(&a.out, &g)?;
            if let Some(p) = &a.mask_out {
                io::write_mask(p, &mask)?;
            }
        }
        Command::Simulate(a) => {
            let src = io::read_image(&a.src)?;
            let trace = io::read_trace(&a.trace)?;
            let k = io::read_intrinsics(&a.intrinsics)?;
            let opts = SynthOptions {
                invert: InvertOptions {
                    iters: a.invert.iters,
                    tol: a.invert.tol,
                },
                quantize_rs: true,
            };
            let pair = synth_pair(&src, &k, &trace, &a.timing.timing()?, &opts)?;
            io::write_image(&a.out, &pair.i_rs)?;
            if let Some(p) = &a.gs_out {
                io::write_image(p, &pair.i_gs)?;
            }
            if let Some(p) = &a.flow_out {
                io::write_flow(p, &pair.field)?;
            }
            if let Some(p) = &a.mask_out {
                io::write_mask(p, &pair.mask)?;
            }
        }
        Command::Correct(a) => {
            let rs = io::read_image(&a.rs)?;
            let mut g = io::read_flow(&a.flow)?;
            if (g.width(), g.height()) != (rs.width(), rs.height()) {
                g = upsample_field(&g, rs.width(), rs.height())?;
            }
            let (gs, mask) = remap(&rs, &g)?;
            io::write_image(&a.out, &gs)?;
            if let Some(p) = &a.mask_out {
                io::write_mask(p, &mask)?;
            }
        }
        Command::InvertField(a) => {
            let g = io::read_flow(&a.flow)?;
            io::write_flow(&a.out, &invert_field(&g, a.invert.iters, a.invert.tol)?)?;
        }
        Command::Synth(a) => {
            let intrinsics = match &a.intrinsics {
                Some(p) => io::read_intrinsics(p)?,
                None => dataset::default_intrinsics(),
            };
            let cfg = SynthConfig {
                count: a.count,
                identity_fraction: a.identity_fraction,
                seed: a.seed,
                pattern_mix: a.pattern_mix,
                intrinsics,
                readout_ns: a.readout_ns,
                gyro_rate_hz: a.gyro_rate_hz,
                trace_duration_ns: a.trace_duration_ns,
                max_rotation_deg: a.max_rotation_deg,
                norm_scale: a.norm_scale,
                model_resolution: a.model_resolution,
                workers: a.workers,
                ..Default::default()
            };
            let samples = dataset::synth_dataset(&a.src, &a.out, &cfg)?;
            log::info!("wrote {} samples to {}", samples.len(), a.out.display());
        }
        Command::Eval(a) => {
            let manifest = io::read_manifest(&a.manifest)?;
            let report = eval::evaluate(&manifest, &a.predictor, a.runs, a.workers)?;
            let json = eval::report_json(&report);
            match &a.out {
                Some(p) => eval::write_text(p, &json)?,
                None => print!("{json}"),
            }
            if let Some(p) = &a.csv {
                eval::write_text(p, &eval::report_csv(&report))?;
            }
        }
        Command::ExportTestvectors(a) => {
            let tv = io::build_testvectors(a.steps, a.beta_start, a.beta_end)?;
            io::write_testvectors(&a.out, &tv)?;
            let reread = io::read_testvectors(&a.out)?;
            let bad = io::verify_testvectors(&reread)?;
            if !bad.is_empty() {
                return Err(CoreError::Contract(format!("test vectors do not reload exactly: {}", bad.join("; "))).into());
            }
        }
    }
    Ok(())
}

/// The single JSON line printed to stderr on failure.
pub fn error_line(e: &Error) -> String {
    serde_json::json!({
        "error": e.kind(),
        "exit_code": e.exit_code(),
        "message": e.to_string(),
    })
    .to_string()
}
