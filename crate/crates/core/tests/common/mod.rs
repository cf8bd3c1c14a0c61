#![allow(dead_code)]

use gyrofield_core::{GyroSample, GyroTrace, ImageBuffer};

pub type M3 = [[f64; 3]; 3];

pub const I3: M3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn mm(a: &M3, b: &M3) -> M3 {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    r
}

pub fn tr(a: &M3) -> M3 {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = a[j][i];
        }
    }
    r
}

pub fn max_diff(a: &M3, b: &M3) -> f64 {
    let mut m = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

pub fn skew(w: [f64; 3]) -> M3 {
    [[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]]
}

/// Matrix exponential of a skew matrix by Taylor series; only used for tiny
/// steps where 12 terms are far below f64 resolution.
pub fn expm_small(w: [f64; 3]) -> M3 {
    let k = skew(w);
    let mut term = I3;
    let mut sum = I3;
    for n in 1..12 {
        term = mm(&term, &k);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= n as f64;
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                sum[i][j] += term[i][j];
            }
        }
    }
    sum
}

/// Angle of `aᵀb`, robust near zero.
pub fn angle_between(a: &M3, b: &M3) -> f64 {
    let d = mm(&tr(a), b);
    let c = ((d[0][0] + d[1][1] + d[2][2] - 1.0) / 2.0).clamp(-1.0, 1.0);
    let s = [d[2][1] - d[1][2], d[0][2] - d[2][0], d[1][0] - d[0][1]];
    let sn = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt() / 2.0;
    sn.atan2(c)
}

/// Orientation at `t_ns` by brute-force zero-order-hold integration with
/// `substeps` matrix-exponential steps per unit interval of the trace.
pub fn fine_orientation(trace: &GyroTrace, t_ns: f64, substeps: usize) -> M3 {
    let s = trace.samples();
    let mut r = I3;
    // Angular velocity before the first sample is the first sample's.
    let mut knots: Vec<(f64, [f64; 3])> = Vec::new();
    if s[0].t_ns > 0 {
        knots.push((0.0, s[0].omega));
    }
    for smp in s {
        knots.push((smp.t_ns as f64, smp.omega));
    }
    for (i, &(t_a, omega)) in knots.iter().enumerate() {
        let t_b = knots.get(i + 1).map(|k| k.0).unwrap_or(trace.duration_ns() as f64);
        if t_a >= t_ns {
            break;
        }
        let end = t_b.min(t_ns);
        let dt = (end - t_a) * 1e-9 / substeps as f64;
        let step = expm_small([omega[0] * dt, omega[1] * dt, omega[2] * dt]);
        for _ in 0..substeps {
            r = mm(&r, &step);
        }
    }
    r
}

pub fn trace(samples: &[(i64, [f64; 3])], duration_ns: i64) -> GyroTrace {
    GyroTrace::new(
        samples
            .iter()
            .map(|&(t_ns, omega)| GyroSample { t_ns, omega })
            .collect(),
        duration_ns,
    )
    .unwrap()
}

/// A smooth, textured test picture: overlapping soft blobs and low-frequency
/// gratings, no hard edges.
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
