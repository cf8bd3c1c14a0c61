use std::fs;
use std::path::Path;

use gyrofield_core::CameraIntrinsics;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// On-disk form of [`CameraIntrinsics`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntrinsicsRecord {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: u32,
    pub height: u32,
}

impl From<&CameraIntrinsics> for IntrinsicsRecord {
    fn from(k: &CameraIntrinsics) -> Self {
        Self {
            fx: k.fx,
            fy: k.fy,
            cx: k.cx,
            cy: k.cy,
            width: k.width,
            height: k.height,
        }
    }
}

impl IntrinsicsRecord {
    pub fn to_intrinsics(&self) -> gyrofield_core::Result<CameraIntrinsics> {
        CameraIntrinsics::new(self.fx, self.fy, self.cx, self.cy, self.width, self.height)
    }
}

pub fn parse_intrinsics(text: &str, path: &Path) -> Result<CameraIntrinsics> {
    let rec: IntrinsicsRecord = serde_json::from_str(text)
        .map_err(|e| Error::format(path, Some(e.line() as u64), e.to_string()))?;
    rec.to_intrinsics()
        .map_err(|e| Error::format(path, None, e.to_string()))
}

pub fn read_intrinsics(path: impl AsRef<Path>) -> Result<CameraIntrinsics> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_intrinsics(&text, path)
}

pub fn write_intrinsics(path: impl AsRef<Path>, k: &CameraIntrinsics) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(&IntrinsicsRecord::from(k)).unwrap() + "\n";
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
