use std::fs;
use std::path::Path;

use gyrofield_core::MotionField;

use crate::error::{Error, Result};

/// Tag that opens every flow file, stored as a little-endian `f32`.
pub const FLOW_MAGIC: f32 = 202021.25;
const HEADER_LEN: usize = 12;

/// Serializes a field as a Middlebury flow file: magic, `i32` width and
/// height, then interleaved `(dx, dy)` as `f32`, all little-endian.
pub fn encode_flow(g: &MotionField) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + g.data().len() * 4);
    out.extend_from_slice(&FLOW_MAGIC.to_le_bytes());
    out.extend_from_slice(&(g.width() as i32).to_le_bytes());
    out.extend_from_slice(&(g.height() as i32).to_le_bytes());
    for v in g.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Parses flow bytes; `path` only labels errors.
pub fn decode_flow(bytes: &[u8], path: &Path) -> Result<MotionField> {
    let word = |at: usize| -> Result<[u8; 4]> {
        bytes
            .get(at..at + 4)
            .map(|b| b.try_into().unwrap())
            .ok_or_else(|| Error::format(path, Some(bytes.len() as u64), "truncated flow header"))
    };
    let magic = f32::from_le_bytes(word(0)?);
    if magic != FLOW_MAGIC {
        return Err(Error::format(path, Some(0), format!("bad flow magic {magic}")));
    }
    let w = i32::from_le_bytes(word(4)?);
    let h = i32::from_le_bytes(word(8)?);
    if w <= 0 {
        return Err(Error::format(path, Some(4), format!("invalid width {w}")));
    }
    if h <= 0 {
        return Err(Error::format(path, Some(8), format!("invalid height {h}")));
    }
    let n = (w as usize)
        .checked_mul(h as usize)
        .and_then(|p| p.checked_mul(2))
        .ok_or_else(|| Error::format(path, Some(4), "flow dimensions overflow"))?;
    let body = &bytes[HEADER_LEN..];
    if body.len() / 4 < n {
        return Err(Error::format(
            path,
            Some(bytes.len() as u64),
            format!("truncated flow data: expected {} bytes", HEADER_LEN + n * 4),
        ));
    }
    if body.len() > n * 4 {
        return Err(Error::format(
            path,
            Some((HEADER_LEN + n * 4) as u64),
            "trailing bytes after flow data",
        ));
    }
    let data: Vec<f32> = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Some(i) = data.iter().position(|v| !v.is_finite()) {
        return Err(Error::format(
            path,
            Some((HEADER_LEN + i * 4) as u64),
            "non-finite flow value",
        ));
    }
    Ok(MotionField::new(w as usize, h as usize, data)?)
}

pub fn read_flow(path: impl AsRef<Path>) -> Result<MotionField> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_flow(&bytes, path)
}

pub fn write_flow(path: impl AsRef<Path>, g: &MotionField) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_flow(g)).map_err(|e| Error::io(path, e))
}
