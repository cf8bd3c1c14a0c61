use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use gyrofield_core::{GyroSample, GyroTrace};

use crate::error::{Error, Result};

pub const TRACE_HEADER: [&str; 4] = ["t_ns", "wx", "wy", "wz"];

/// Parses a gyro CSV (`t_ns,wx,wy,wz`). The trace ends at its last sample.
pub fn parse_trace(reader: impl Read, path: &Path) -> Result<GyroTrace> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| Error::format(path, Some(1), e.to_string()))?;
    if header.iter().ne(TRACE_HEADER) {
        return Err(Error::format(
            path,
            Some(1),
            format!("expected header t_ns,wx,wy,wz, found {}", header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut samples = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line());
            Error::format(path, line, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line());
        let bad = |what: &str, s: &str| Error::format(path, line, format!("invalid {what} {s:?}"));
        let t_ns = rec[0].parse::<i64>().map_err(|_| bad("t_ns", &rec[0]))?;
        let mut omega = [0.0; 3];
        for (k, w) in omega.iter_mut().enumerate() {
            let s = &rec[k + 1];
            *w = s.parse::<f64>().map_err(|_| bad(TRACE_HEADER[k + 1], s))?;
        }
        samples.push(GyroSample { t_ns, omega });
    }
    GyroTrace::from_samples(samples).map_err(|e| Error::format(path, None, e.to_string()))
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<GyroTrace> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_trace(file, path)
}

/// Floats use the shortest representation that reads back bit-exactly.
pub fn format_trace(trace: &GyroTrace) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRACE_HEADER).unwrap();
    for s in trace.samples() {
        w.write_record([
            s.t_ns.to_string(),
            s.omega[0].to_string(),
            s.omega[1].to_string(),
            s.omega[2].to_string(),
        ])
        .unwrap();
    }
    w.into_inner().unwrap()
}

pub fn write_trace(path: impl AsRef<Path>, trace: &GyroTrace) -> Result<()> {
    let path = path.as_ref();
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&format_trace(trace)).map_err(|e| Error::io(path, e))
}
