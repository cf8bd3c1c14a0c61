use std::fs;
use std::path::{Path, PathBuf};

use gyrofield_core::{MotionPattern, PatternKind, RowTiming};
use serde::{Deserialize, Serialize};

use super::intrinsics::IntrinsicsRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternRecord {
    pub kind: String,
    pub amplitude: [f64; 3],
    pub frequency_hz: f64,
    pub cutoff_hz: f64,
    pub seed: u64,
}

impl From<&MotionPattern> for PatternRecord {
    fn from(p: &MotionPattern) -> Self {
        Self {
            kind: p.kind.name().to_string(),
            amplitude: p.amplitude,
            frequency_hz: p.frequency_hz,
            cutoff_hz: p.cutoff_hz,
            seed: p.seed,
        }
    }
}

impl PatternRecord {
    pub fn to_pattern(&self) -> Option<MotionPattern> {
        Some(MotionPattern {
            kind: PatternKind::from_name(&self.kind)?,
            amplitude: self.amplitude,
            frequency_hz: self.frequency_hz,
            cutoff_hz: self.cutoff_hz,
            seed: self.seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingRecord {
    pub readout_ns: i64,
    pub t0_ns: i64,
    pub reference_row: u32,
}

impl From<&RowTiming> for TimingRecord {
    fn from(t: &RowTiming) -> Self {
        Self {
            readout_ns: t.readout_ns,
            t0_ns: t.t0_ns,
            reference_row: t.reference_row,
        }
    }
}

/// One manifest line. Paths are relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSample {
    pub id: String,
    /// File name of the source image within the source directory.
    pub source: String,
    pub rs_path: String,
    pub gs_path: String,
    pub flow_path: String,
    pub trace_path: String,
    pub mask_path: String,
    pub model_rs_path: String,
    pub model_gs_path: String,
    pub model_flow_path: String,
    pub intrinsics: IntrinsicsRecord,
    pub timing: TimingRecord,
    pub pattern: PatternRecord,
    pub is_identity_pair: bool,
    pub norm_scale: f64,
    /// Side of the square model-resolution copies.
    pub model_resolution: u32,
}

/// A manifest together with the directory its relative paths resolve in.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub root: PathBuf,
    pub samples: Vec<DatasetSample>,
}

impl Manifest {
    pub fn resolve(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }
}

pub fn format_manifest(samples: &[DatasetSample]) -> String {
    let mut out = String::new();
    for s in samples {
        out.push_str(&serde_json::to_string(s).expect("manifest rows serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_manifest(text: &str, path: &Path) -> Result<Vec<DatasetSample>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::format(path, Some(i as u64 + 1), e.to_string()))
        })
        .collect()
}

pub fn write_manifest(path: impl AsRef<Path>, samples: &[DatasetSample]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_manifest(samples)).map_err(|e| Error::io(path, e))
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(Manifest {
        root: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        samples: parse_manifest(&text, path)?,
    })
}
