use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gyrofield_core::diffusion::SamplerConfig;
use gyrofield_core::metrics::MeanStd;
use gyrofield_core::{
    denormalize_field, epe, normalize_field, psnr, remap, sample_field, ssim, upsample_field,
    Denoiser, FieldTensor, ImageBuffer, MotionField, NoiseSchedule, ValidMask,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::thread_pool;
use crate::error::{Error, Result};
use crate::io::{self, DatasetSample, Manifest};

/// What a predictor sees for one sample.
pub struct PredictorInput<'a> {
    pub sample: &'a DatasetSample,
    pub manifest: &'a Manifest,
    /// Rolling-shutter image at model resolution.
    pub model_rs: &'a ImageBuffer,
}

/// Maps a rolling-shutter image to a normalized correction field. The
/// tensor may have any resolution; displacements are in pixels of that
/// resolution divided by the sample's `norm_scale`.
pub trait FieldPredictor: Sync {
    fn name(&self) -> String;
    fn predict(&self, input: &PredictorInput<'_>, run: usize) -> Result<FieldTensor>;
}

/// Built-in predictors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predictor {
    /// The stored ground-truth field.
    Oracle,
    /// No correction.
    Zero,
    /// `DIR/<id>.flo`, in native or model resolution pixels.
    Flows(PathBuf),
}

impl FromStr for Predictor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "oracle" => Ok(Predictor::Oracle),
            "zero" => Ok(Predictor::Zero),
            _ => match s.strip_prefix("flows:") {
                Some(dir) if !dir.is_empty() => Ok(Predictor::Flows(PathBuf::from(dir))),
                _ => Err(format!("unknown predictor {s:?} (expected oracle, zero or flows:DIR)")),
            },
        }
    }
}

impl FieldPredictor for Predictor {
    fn name(&self) -> String {
        match self {
            Predictor::Oracle => "oracle".into(),
            Predictor::Zero => "zero".into(),
            Predictor::Flows(dir) => format!("flows:{}", dir.display()),
        }
    }

    fn predict(&self, input: &PredictorInput<'_>, _run: usize) -> Result<FieldTensor> {
        let s = input.sample;
        let field = match self {
            Predictor::Oracle => io::read_flow(input.manifest.resolve(&s.flow_path))?,
            Predictor::Zero => {
                let m = s.model_resolution as usize;
                return Ok(FieldTensor::zeros(2, m, m));
            }
            Predictor::Flows(dir) => io::read_flow(dir.join(format!("{}.flo", s.id)))?,
        };
        Ok(normalize_field(&field, s.norm_scale)?)
    }
}

/// Runs a denoiser through the DDIM sampler, seeding run `r` with
/// `config.seed + r`.
pub struct DiffusionPredictor<D> {
    pub name: String,
    pub denoiser: D,
    pub config: SamplerConfig,
    pub schedule: NoiseSchedule,
}

impl<D: Denoiser + Sync> FieldPredictor for DiffusionPredictor<D> {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn predict(&self, input: &PredictorInput<'_>, run: usize) -> Result<FieldTensor> {
        let cfg = SamplerConfig {
            seed: self.config.seed.wrapping_add(run as u64),
            ..self.config
        };
        Ok(sample_field(&self.denoiser, input.model_rs, &cfg, &self.schedule)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub psnr_db: f64,
    pub ssim: f64,
    pub epe_px: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub id: String,
    /// Means over runs.
    pub psnr_db: f64,
    pub ssim: f64,
    pub epe_px: f64,
    pub runs: Vec<Metrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailedSample {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl From<MeanStd> for Stat {
    fn from(m: MeanStd) -> Self {
        Self {
            mean: m.mean,
            std: m.std,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricStats {
    pub psnr_db: Stat,
    pub ssim: Stat,
    pub epe_px: Stat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregate {
    /// Per-run dataset means, summarized over runs.
    pub over_runs: MetricStats,
    /// Per-sample run means, summarized over samples.
    pub over_samples: MetricStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub predictor: String,
    pub run_count: usize,
    pub sample_count: usize,
    pub failed_count: usize,
    /// `None` when every sample failed.
    pub aggregate: Option<Aggregate>,
    pub samples: Vec<SampleReport>,
    pub failed: Vec<FailedSample>,
}

/// Brings a predicted tensor back to a native-resolution pixel field.
pub fn tensor_to_field(x: &FieldTensor, norm_scale: f64, width: usize, height: usize) -> Result<MotionField> {
    let g = denormalize_field(x, norm_scale)?;
    if (g.width(), g.height()) == (width, height) {
        return Ok(g);
    }
    Ok(upsample_field(&g, width, height)?)
}

struct Loaded {
    i_rs: ImageBuffer,
    i_gs: ImageBuffer,
    gt: MotionField,
    mask: ValidMask,
    model_rs: ImageBuffer,
}

fn load(manifest: &Manifest, s: &DatasetSample) -> Result<Loaded> {
    Ok(Loaded {
        i_rs: io::read_image(manifest.resolve(&s.rs_path))?,
        i_gs: io::read_image(manifest.resolve(&s.gs_path))?,
        gt: io::read_flow(manifest.resolve(&s.flow_path))?,
        mask: io::read_mask(manifest.resolve(&s.mask_path))?,
        model_rs: io::read_image(manifest.resolve(&s.model_rs_path))?,
    })
}

fn evaluate_sample(
    manifest: &Manifest,
    s: &DatasetSample,
    predictor: &dyn FieldPredictor,
    runs: usize,
) -> Result<Vec<Metrics>> {
    let d = load(manifest, s)?;
    let input = PredictorInput {
        sample: s,
        manifest,
        model_rs: &d.model_rs,
    };
    (0..runs)
        .map(|run| {
            let x = predictor.predict(&input, run)?;
            let g = tensor_to_field(&x, s.norm_scale, d.i_rs.width(), d.i_rs.height())?;
            let (corrected, _) = remap(&d.i_rs, &g)?;
            let corrected = corrected.quantized();
            Ok(Metrics {
                psnr_db: psnr(&corrected, &d.i_gs, &d.mask)?,
                ssim: ssim(&corrected, &d.i_gs, &d.mask)?,
                epe_px: epe(&g, &d.gt, &d.mask)?,
            })
        })
        .collect()
}

fn stats(rows: &[Metrics]) -> Option<MetricStats> {
    let col = |f: fn(&Metrics) -> f64| -> Option<Stat> {
        MeanStd::of(&rows.iter().map(f).collect::<Vec<_>>()).map(Stat::from)
    };
    Some(MetricStats {
        psnr_db: col(|m| m.psnr_db)?,
        ssim: col(|m| m.ssim)?,
        epe_px: col(|m| m.epe_px)?,
    })
}

fn mean_metrics<'a>(rows: impl Iterator<Item = &'a Metrics>) -> Metrics {
    let rows: Vec<&Metrics> = rows.collect();
    let mean = |f: fn(&Metrics) -> f64| {
        MeanStd::of(&rows.iter().map(|m| f(m)).collect::<Vec<_>>()).map_or(f64::NAN, |s| s.mean)
    };
    Metrics {
        psnr_db: mean(|m| m.psnr_db),
        ssim: mean(|m| m.ssim),
        epe_px: mean(|m| m.epe_px),
    }
}

/// Scores `predictor` on every manifest sample over `runs` repetitions.
/// Samples that fail to load, predict or score are listed in `failed` and
/// left out of the aggregates.
pub fn evaluate(
    manifest: &Manifest,
    predictor: &dyn FieldPredictor,
    runs: usize,
    workers: usize,
) -> Result<EvalReport> {
    if runs == 0 {
        return Err(Error::Usage("runs must be ≥ 1".into()));
    }
    let mut order: Vec<&DatasetSample> = manifest.samples.iter().collect();
    order.sort_by(|a, b| a.id.cmp(&b.id));
    let results: Vec<(String, Result<Vec<Metrics>>)> = thread_pool(workers)?.install(|| {
        order
            .par_iter()
            .map(|s| (s.id.clone(), evaluate_sample(manifest, s, predictor, runs)))
            .collect()
    });

    let mut samples = Vec::new();
    let mut failed = Vec::new();
    for (id, r) in results {
        match r {
            Ok(runs) => {
                let m = mean_metrics(runs.iter());
                samples.push(SampleReport {
                    id,
                    psnr_db: m.psnr_db,
                    ssim: m.ssim,
                    epe_px: m.epe_px,
                    runs,
                });
            }
            Err(e) => {
                log::warn!("sample {id} failed: {e}");
                failed.push(FailedSample {
                    id,
                    error: e.to_string(),
                });
            }
        }
    }
    let per_run: Vec<Metrics> = (0..runs)
        .map(|r| mean_metrics(samples.iter().map(|s| &s.runs[r])))
        .collect();
    let per_sample: Vec<Metrics> = samples
        .iter()
        .map(|s| Metrics {
            psnr_db: s.psnr_db,
            ssim: s.ssim,
            epe_px: s.epe_px,
        })
        .collect();
    let aggregate = (!samples.is_empty()).then(|| Aggregate {
        over_runs: stats(&per_run).expect("runs ≥ 1"),
        over_samples: stats(&per_sample).expect("samples nonempty"),
    });
    Ok(EvalReport {
        predictor: predictor.name(),
        run_count: runs,
        sample_count: samples.len(),
        failed_count: failed.len(),
        aggregate,
        samples,
        failed,
    })
}

pub fn report_json(report: &EvalReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}

/// One-row table `method,PSNR,SSIM,EPE` with the spread over runs in
/// parentheses.
pub fn report_csv(report: &EvalReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["method", "PSNR", "SSIM", "EPE"]).unwrap();
    let cell = |s: Stat, digits: usize| format!("{:.d$} ({:.d$})", s.mean, s.std, d = digits);
    let row = match &report.aggregate {
        Some(a) => {
            let r = a.over_runs;
            [report.predictor.clone(), cell(r.psnr_db, 2), cell(r.ssim, 4), cell(r.epe_px, 3)]
        }
        None => [report.predictor.clone(), "n/a".into(), "n/a".into(), "n/a".into()],
    };
    w.write_record(&row).unwrap();
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predictor_names_parse() {
        assert_eq!("oracle".parse::<Predictor>(), Ok(Predictor::Oracle));
        assert_eq!("zero".parse::<Predictor>(), Ok(Predictor::Zero));
        assert_eq!("flows:out/f".parse::<Predictor>(), Ok(Predictor::Flows("out/f".into())));
        assert!("flows:".parse::<Predictor>().is_err());
        assert!("unet".parse::<Predictor>().is_err());
    }

    #[test]
    fn csv_layout() {
        let s = |mean, std| Stat { mean, std };
        let ms = MetricStats {
            psnr_db: s(34.92, 0.12),
            ssim: s(0.79, 0.0),
            epe_px: s(0.9, 0.01),
        };
        let report = EvalReport {
            predictor: "m".into(),
            run_count: 10,
            sample_count: 1,
            failed_count: 0,
            aggregate: Some(Aggregate {
                over_runs: ms,
                over_samples: ms,
            }),
            samples: vec![],
            failed: vec![],
        };
        assert_eq!(
            report_csv(&report),
            "method,PSNR,SSIM,EPE\nm,34.92 (0.12),0.7900 (0.0000),0.900 (0.010)\n"
        );
    }
}
