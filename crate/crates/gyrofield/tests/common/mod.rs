#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use gyrofield::dataset::SynthConfig;
use gyrofield::io;
use gyrofield_core::{CameraIntrinsics, ImageBuffer};

/// Smooth textured picture: soft color blobs over a low-frequency grating.
pub fn natural_image(w: usize, h: usize, seed: u64) -> ImageBuffer {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let blobs: Vec<[f64; 6]> = (0..12)
        .map(|_| {
            [
                next() * w as f64,
                next() * h as f64,
                (0.08 + 0.2 * next()) * w.min(h) as f64,
                next() - 0.5,
                next() - 0.5,
                next() - 0.5,
            ]
        })
        .collect();
    let (fx, fy, ph) = (0.02 + 0.03 * next(), 0.015 + 0.03 * next(), next() * 6.0);
    ImageBuffer::from_fn(w, h, 3, |x, y, c| {
        let (xf, yf) = (x as f64, y as f64);
        let mut v = 0.5 + 0.08 * (fx * xf + ph + c as f64).sin() * (fy * yf).cos();
        for b in &blobs {
            let d2 = ((xf - b[0]).powi(2) + (yf - b[1]).powi(2)) / (b[2] * b[2]);
            v += 0.5 * b[3 + c] * (-d2).exp();
        }
        v.clamp(0.0, 1.0) as f32
    })
    .unwrap()
}

/// `n` PNG sources named `src_<i>.png`.
pub fn write_sources(dir: &Path, n: usize, w: usize, h: usize) {
    fs::create_dir_all(dir).unwrap();
    for i in 0..n {
        io::write_image(dir.join(format!("src_{i}.png")), &natural_image(w, h, i as u64 + 1)).unwrap();
    }
}

pub fn small_intrinsics() -> CameraIntrinsics {
    CameraIntrinsics::new(120.0, 120.0, 60.0, 80.0, 120, 160).unwrap()
}

/// A quick dataset configuration at 120×160 with 32×32 model copies.
pub fn small_config(count: usize, seed: u64) -> SynthConfig {
    SynthConfig {
        count,
        seed,
        intrinsics: small_intrinsics(),
        model_resolution: 32,
        ..Default::default()
    }
}

/// Every file under `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().replace('\\', "/");
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    out
}
