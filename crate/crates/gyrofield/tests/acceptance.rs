//! Exit criteria, one line each. Run with
//! `cargo test -p gyrofield --test acceptance`.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use common::{natural_image, snapshot};
use gyrofield::dataset::{default_intrinsics, synth_dataset, SynthConfig};
use gyrofield::io;
use gyrofield_core::diffusion::SamplerConfig;
use gyrofield_core::{
    build_igf, epe, gen_gyro_trace, invert_field, psnr, remap, rodrigues, row_rotations,
    sample_field, ssim, upsample_field, FieldTensor, ImageBuffer, MotionField, MotionPattern,
    NoiseSchedule, RowTiming, ValidMask,
};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type M3 = [[f64; 3]; 3];
type Checked = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mat_mul(a: &M3, b: &M3) -> M3 {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    r
}

fn mat_diff(a: &M3, b: &M3) -> f64 {
    let mut m = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

fn det(a: &M3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

const I3: M3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn random_rotation_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let axis: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    let angle = rng.random_range(-PI..PI);
    axis.map(|a| a / n * angle)
}

fn so3_suite() -> Checked {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let a = rodrigues(random_rotation_vector(&mut rng)).map_err(|e| e.to_string())?;
        let b = rodrigues(random_rotation_vector(&mut rng)).map_err(|e| e.to_string())?;
        let (ma, mb) = (a.matrix(), b.matrix());
        let mut mt = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                mt[i][j] = ma[j][i];
            }
        }
        worst = worst
            .max(mat_diff(&mat_mul(&mt, &ma), &I3))
            .max((det(&ma) - 1.0).abs())
            .max(mat_diff(&(a * b).matrix(), &mat_mul(&ma, &mb)));
    }
    ensure(worst <= 1e-9, || format!("invariant error {worst:.2e} > 1e-9"))?;

    let (c, s) = (0.3f64.cos(), 0.3f64.sin());
    let (ct, st) = (1e-9f64.cos(), 1e-9f64.sin());
    let r3 = 1.0 / 3f64.sqrt();
    let cases: [([f64; 3], M3); 6] = [
        ([0.0; 3], I3),
        ([0.0, 0.0, PI / 2.0], [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
        ([PI, 0.0, 0.0], [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]),
        ([0.0, 0.3, 0.0], [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]),
        ([1e-9, 0.0, 0.0], [[1.0, 0.0, 0.0], [0.0, ct, -st], [0.0, st, ct]]),
        ([2.0 * PI / 3.0 * r3; 3], [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
    ];
    let mut analytic = 0.0f64;
    for (v, want) in cases {
        analytic = analytic.max(mat_diff(&rodrigues(v).unwrap().matrix(), &want));
    }
    ensure(analytic <= 1e-12, || format!("analytic case error {analytic:.2e} > 1e-12"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!("invariants {worst:.1e}, analytic {analytic:.1e}, {secs:.2} s"))
}

fn max_row_angle_deg(trace: &gyrofield_core::GyroTrace, timing: &RowTiming, h: usize) -> f64 {
    row_rotations(trace, timing, h)
        .unwrap()
        .iter()
        .map(|r| r.angle().to_degrees())
        .fold(0.0, f64::max)
}

fn igf_round_trip(tmp: &Path) -> Checked {
    let start = Instant::now();
    let src_dir = tmp.join("igf_src");
    std::fs::create_dir_all(&src_dir).unwrap();
    for i in 0..4 {
        io::write_image(src_dir.join(format!("s{i}.png")), &natural_image(600, 800, 40 + i)).unwrap();
    }
    let out = tmp.join("igf_ds");
    let cfg = SynthConfig {
        count: 20,
        identity_fraction: 0.0,
        seed: 5,
        ..Default::default()
    };
    let rows = synth_dataset(&src_dir, &out, &cfg).map_err(|e| e.to_string())?;
    let k = default_intrinsics();
    let timing = cfg.timing().unwrap();
    let mut kinds = std::collections::BTreeSet::new();
    let (mut min_psnr, mut worst_label, mut worst_deg, mut slowest) = (f64::INFINITY, 0.0f32, 0.0f64, 0.0f64);
    for r in &rows {
        kinds.insert(r.pattern.kind.clone());
        let src = io::read_image(src_dir.join(&r.source)).unwrap();
        let rs = io::read_image(out.join(&r.rs_path)).unwrap();
        let gs = io::read_image(out.join(&r.gs_path)).unwrap();
        let g = io::read_flow(out.join(&r.flow_path)).unwrap();
        let mask = io::read_mask(out.join(&r.mask_path)).unwrap();
        let trace = io::read_trace(out.join(&r.trace_path)).unwrap();
        worst_deg = worst_deg.max(max_row_angle_deg(&trace, &timing, 800));

        let (corrected, _) = remap(&rs, &g).unwrap();
        min_psnr = min_psnr.min(psnr(&corrected, &src, &mask).unwrap());
        for (a, b) in corrected.data().iter().zip(gs.data()) {
            worst_label = worst_label.max((a - b).abs());
        }

        let inv = invert_field(&g, 10, 1e-3).unwrap();
        let t = Instant::now();
        let rot = row_rotations(&trace, &timing, 800).unwrap();
        let (field, _) = build_igf(&k, &rot, 600, 800).unwrap();
        let (rs_again, _) = remap(&src, &inv).unwrap();
        let _ = remap(&rs_again, &field).unwrap();
        slowest = slowest.max(t.elapsed().as_secs_f64());
    }
    let total = start.elapsed().as_secs_f64();
    ensure(rows.len() == 20 && kinds.len() == 3, || format!("{} samples, kinds {kinds:?}", rows.len()))?;
    ensure(worst_deg <= 3.0 + 1e-9, || format!("rotation {worst_deg:.3}° exceeds 3°"))?;
    ensure(min_psnr >= 30.0, || format!("min PSNR {min_psnr:.2} dB < 30"))?;
    ensure(worst_label as f64 <= 1.0 / 255.0 + 1e-6, || format!("label error {worst_label:.3e}"))?;
    ensure(slowest < 1.0, || format!("slowest sample {slowest:.3} s"))?;
    ensure(total < 30.0, || format!("total {total:.1} s"))?;
    Ok(format!(
        "min PSNR {min_psnr:.2} dB, label err {worst_label:.2e}, max rot {worst_deg:.2}°, slowest {slowest:.3} s, total {total:.1} s"
    ))
}

/// Clamped bilinear sample of one field component.
fn bilinear(g: &MotionField, x: f64, y: f64) -> [f64; 2] {
    let (w, h) = (g.width(), g.height());
    let x = x.clamp(0.0, (w - 1) as f64);
    let y = y.clamp(0.0, (h - 1) as f64);
    let (x0, y0) = (x.floor() as usize, y.floor() as usize);
    let (x1, y1) = ((x0 + 1).min(w - 1), (y0 + 1).min(h - 1));
    let (fx, fy) = (x - x0 as f64, y - y0 as f64);
    let at = |xx, yy| g.get(xx, yy).map(|v| v as f64);
    let (a, b, c, d) = (at(x0, y0), at(x1, y0), at(x0, y1), at(x1, y1));
    std::array::from_fn(|k| {
        (a[k] * (1.0 - fx) + b[k] * fx) * (1.0 - fy) + (c[k] * (1.0 - fx) + d[k] * fx) * fy
    })
}

fn smooth_field(w: usize, h: usize, seed: u64) -> MotionField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<[f64; 5]> = (0..4)
        .map(|_| {
            [
                rng.random_range(300.0..900.0),
                rng.random_range(300.0..900.0),
                rng.random_range(0.0..2.0 * PI),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ]
        })
        .collect();
    let raw = |x: usize, y: usize| {
        let mut d = [0.0f64; 2];
        for wv in &waves {
            let s = (2.0 * PI * (x as f64 / wv[0] + y as f64 / wv[1]) + wv[2]).sin();
            d[0] += wv[3] * s;
            d[1] += wv[4] * (2.0 * PI * y as f64 / wv[1] + wv[2]).cos();
        }
        d
    };
    let mut peak = 0.0f64;
    for y in 0..h {
        for x in 0..w {
            let d = raw(x, y);
            peak = peak.max(d[0].hypot(d[1]));
        }
    }
    MotionField::from_fn(w, h, |x, y| {
        let d = raw(x, y);
        [(d[0] * 10.0 / peak) as f32, (d[1] * 10.0 / peak) as f32]
    })
    .unwrap()
}

fn field_inversion() -> Checked {
    let mut worst = 0.0f64;
    let mut peak = 0.0f64;
    for seed in 0..6 {
        let g = smooth_field(600, 800, seed);
        peak = peak.max(g.max_magnitude());
        let inv = invert_field(&g, 10, 0.0).map_err(|e| e.to_string())?;
        let mut sum = 0.0;
        for y in 0..800 {
            for x in 0..600 {
                let v = inv.get(x, y).map(|c| c as f64);
                let s = bilinear(&g, x as f64 + v[0], y as f64 + v[1]);
                sum += (v[0] + s[0]).hypot(v[1] + s[1]);
            }
        }
        worst = worst.max(sum / (600.0 * 800.0));
    }
    ensure(peak <= 10.0 + 1e-4, || format!("field peak {peak}"))?;
    ensure(worst < 0.05, || format!("mean residual {worst:.4} px ≥ 0.05"))?;
    Ok(format!("6 fields up to {peak:.2} px, worst mean residual {worst:.5} px after 10 iterations"))
}

fn upsample_vs_native() -> Checked {
    let k = default_intrinsics();
    let km = k.scaled(64, 64).unwrap();
    let timing = RowTiming::new(30_000_000, 85_000_000, 0).unwrap();
    let rate = 3f64.to_radians() / 0.03;
    let patterns = [
        MotionPattern::constant([0.0, rate, 0.0]),
        MotionPattern::constant([rate, 0.0, 0.0]),
        MotionPattern::constant([0.0, 0.0, rate]),
        MotionPattern::constant([rate * 0.6, rate * 0.64, rate * 0.48]),
        MotionPattern::sinusoid([0.3 * rate, 0.9 * rate, 0.2 * rate], 3.0),
        MotionPattern::smooth_noise([0.5 * rate, 0.7 * rate, 0.4 * rate], 15.0, 9),
    ];
    let mut worst = 0.0f64;
    let mut worst_deg = 0.0f64;
    for p in &patterns {
        let trace = gen_gyro_trace(p, 200_000_000, 200.0).unwrap();
        worst_deg = worst_deg.max(max_row_angle_deg(&trace, &timing, 800));
        let (native, _) = build_igf(&k, &row_rotations(&trace, &timing, 800).unwrap(), 600, 800).unwrap();
        let (small, _) = build_igf(&km, &row_rotations(&trace, &timing, 64).unwrap(), 64, 64).unwrap();
        let up = upsample_field(&small, 600, 800).unwrap();
        let mut sum = 0.0;
        for y in 0..800 {
            for x in 0..600 {
                let (a, b) = (up.get(x, y), native.get(x, y));
                sum += (a[0] as f64 - b[0] as f64).hypot(a[1] as f64 - b[1] as f64);
            }
        }
        worst = worst.max(sum / (600.0 * 800.0));
    }
    ensure(worst_deg <= 3.0 + 1e-9, || format!("rotation {worst_deg:.3}°"))?;
    ensure(worst < 0.5, || format!("mean difference {worst:.3} px ≥ 0.5"))?;
    Ok(format!("{} patterns up to {worst_deg:.2}°, worst mean difference {worst:.4} px", patterns.len()))
}

/// ᾱ_t in exact rationals: β_t = (999 + 199·t) / 9 990 000.
fn exact_alpha_bars() -> Vec<f64> {
    let den = BigInt::from(9_990_000u64);
    let mut num = BigInt::one();
    let mut d = BigInt::one();
    (0..1000u64)
        .map(|t| {
            num *= BigInt::from(9_990_000u64 - 999 - 199 * t);
            d *= &den;
            let q: BigInt = (&num << 256u32) / &d;
            q.to_f64().unwrap() / 2f64.powi(256)
        })
        .collect()
}

fn diffusion_suite() -> Checked {
    let start = Instant::now();
    let s = NoiseSchedule::default();
    let exact = exact_alpha_bars();
    let rel = s
        .alpha_bar()
        .iter()
        .zip(&exact)
        .map(|(a, e)| (a - e).abs() / e)
        .fold(0.0, f64::max);

    let target = FieldTensor::new(2, 16, 16, (0..512).map(|i| ((i * 37 % 101) as f64 / 50.0) - 1.0).collect()).unwrap();
    let oracle = |_: &FieldTensor, _: usize, _: Option<&ImageBuffer>| target.clone();
    let cond = ImageBuffer::filled(16, 16, 3, 0.3).unwrap();
    let out = sample_field(&oracle, &cond, &SamplerConfig { seed: 3, ..Default::default() }, &s).unwrap();
    let recovered = out.data().iter().zip(target.data()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let (mu, sigma) = (1.0f64, 0.5f64);
    let gaussian = |x: &FieldTensor, t: usize, _: Option<&ImageBuffer>| {
        let ab = s.alpha_bar()[t];
        let v = x.data()[0];
        FieldTensor::scalar((ab.sqrt() * sigma * sigma * v + (1.0 - ab) * mu) / (ab * sigma * sigma + 1.0 - ab))
    };
    let unit = ImageBuffer::filled(1, 1, 1, 0.5).unwrap();
    let draws: Vec<f64> = (0..10_000u64)
        .map(|seed| {
            let cfg = SamplerConfig { steps: 8, seed, channels: 1, ..Default::default() };
            sample_field(&gaussian, &unit, &cfg, &s).unwrap().data()[0]
        })
        .collect();
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let std = (draws.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let secs = start.elapsed().as_secs_f64();

    let detail = format!(
        "alpha_bar rel {rel:.1e}, oracle recovery {recovered:.1e}, gaussian mean {mean:.4} (μ {mu}), std {std:.4} (σ {sigma}), {secs:.1} s"
    );
    ensure(rel <= 1e-12, || format!("alpha_bar relative error {rel:.2e}; {detail}"))?;
    ensure(recovered <= 1e-5, || format!("oracle recovery {recovered:.2e}; {detail}"))?;
    ensure((mean - mu).abs() <= mu.abs() * 0.02 + 0.05, || format!("gaussian mean off; {detail}"))?;
    ensure((std - sigma).abs() <= 0.1 * sigma, || format!("gaussian std outside 10% of σ; {detail}"))?;
    ensure(secs < 60.0, || format!("too slow; {detail}"))?;
    Ok(detail)
}

fn metrics_suite() -> Checked {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (w, h) = (23usize, 17usize);
    let (mut d_psnr, mut d_ssim, mut d_epe, mut asym) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for trial in 0..40 {
        let ch = if trial % 2 == 0 { 3 } else { 1 };
        let a: Vec<f32> = (0..w * h * ch).map(|_| rng.random::<f32>()).collect();
        let b: Vec<f32> = a.iter().map(|v| (v + 0.3 * (rng.random::<f32>() - 0.5)).clamp(0.0, 1.0)).collect();
        let bits: Vec<bool> = (0..w * h).map(|_| rng.random_bool(0.8)).collect();
        let mask = ValidMask::new(w, h, bits).unwrap();
        let a = ImageBuffer::new(w, h, ch, a).unwrap();
        let b = ImageBuffer::new(w, h, ch, b).unwrap();
        let p = psnr(&a, &b, &mask).unwrap();
        d_psnr = d_psnr.max((p - psnr_loop(&a, &b, &mask)).abs());
        let q = ssim(&a, &b, &mask).unwrap();
        d_ssim = d_ssim.max((q - ssim_loop(&a, &b, &mask)).abs());
        let f: Vec<f32> = (0..w * h * 2).map(|_| rng.random_range(-20.0..20.0)).collect();
        let g: Vec<f32> = (0..w * h * 2).map(|_| rng.random_range(-20.0..20.0)).collect();
        let (f, g) = (MotionField::new(w, h, f).unwrap(), MotionField::new(w, h, g).unwrap());
        let e = epe(&f, &g, &mask).unwrap();
        d_epe = d_epe.max((e - epe_loop(&f, &g, &mask)).abs());
        asym = asym
            .max((p - psnr(&b, &a, &mask).unwrap()).abs())
            .max((q - ssim(&b, &a, &mask).unwrap()).abs())
            .max((e - epe(&g, &f, &mask).unwrap()).abs());
    }
    ensure(d_psnr <= 1e-9, || format!("PSNR off by {d_psnr:.2e} dB"))?;
    ensure(d_ssim <= 1e-6, || format!("SSIM off by {d_ssim:.2e}"))?;
    ensure(d_epe <= 1e-9, || format!("EPE off by {d_epe:.2e} px"))?;
    ensure(asym <= 1e-12, || format!("asymmetry {asym:.2e}"))?;

    let full = ValidMask::all_valid(20, 20);
    let lo = ImageBuffer::filled(20, 20, 3, 0.25).unwrap();
    let hi = ImageBuffer::filled(20, 20, 3, 0.35).unwrap();
    let tenth = psnr(&lo, &hi, &full).unwrap();
    // 0.35 − 0.25 is 0.1 up to f32 storage.
    ensure((tenth - 20.0).abs() < 1e-5, || format!("uniform 0.1 difference gave {tenth} dB"))?;
    let g = MotionField::from_fn(20, 20, |x, y| [x as f32 - 4.0, 0.5 * y as f32]).unwrap();
    let shifted = MotionField::from_fn(20, 20, |x, y| {
        let d = g.get(x, y);
        [d[0] + 3.0, d[1] + 4.0]
    })
    .unwrap();
    let five = epe(&shifted, &g, &full).unwrap();
    ensure((five - 5.0).abs() <= 1e-9, || format!("(3, 4) shift gave EPE {five}"))?;
    Ok(format!(
        "oracle gaps PSNR {d_psnr:.1e} dB, SSIM {d_ssim:.1e}, EPE {d_epe:.1e} px; 0.1 diff → {tenth:.6} dB; (3,4) → {five}"
    ))
}

fn psnr_loop(a: &ImageBuffer, b: &ImageBuffer, m: &ValidMask) -> f64 {
    let (mut sum, mut n) = (0.0, 0.0);
    for y in 0..a.height() {
        for x in 0..a.width() {
            if m.get(x, y) {
                for c in 0..a.channels() {
                    sum += (a.get(x, y, c) as f64 - b.get(x, y, c) as f64).powi(2);
                    n += 1.0;
                }
            }
        }
    }
    if sum == 0.0 {
        99.0
    } else {
        (10.0 * (n / sum).log10()).min(99.0)
    }
}

fn luma(img: &ImageBuffer, x: usize, y: usize) -> f64 {
    if img.channels() == 1 {
        return img.get(x, y, 0) as f64;
    }
    0.299 * img.get(x, y, 0) as f64 + 0.587 * img.get(x, y, 1) as f64 + 0.114 * img.get(x, y, 2) as f64
}

fn ssim_loop(a: &ImageBuffer, b: &ImageBuffer, m: &ValidMask) -> f64 {
    let mut win = [[0.0f64; 11]; 11];
    let mut total = 0.0;
    for (i, row) in win.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - 5.0, j as f64 - 5.0);
            *v = (-(di * di + dj * dj) / 4.5).exp();
            total += *v;
        }
    }
    let (c1, c2) = (1e-4, 9e-4);
    let (mut acc, mut n) = (0.0, 0.0);
    for cy in 5..a.height() - 5 {
        for cx in 5..a.width() - 5 {
            if !m.get(cx, cy) {
                continue;
            }
            let (mut ma, mut mb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for i in 0..11 {
                for j in 0..11 {
                    let w = win[i][j] / total;
                    let (p, q) = (luma(a, cx + j - 5, cy + i - 5), luma(b, cx + j - 5, cy + i - 5));
                    ma += w * p;
                    mb += w * q;
                    saa += w * p * p;
                    sbb += w * q * q;
                    sab += w * p * q;
                }
            }
            let (va, vb, cov) = (saa - ma * ma, sbb - mb * mb, sab - ma * mb);
            acc += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            n += 1.0;
        }
    }
    acc / n
}

fn epe_loop(p: &MotionField, g: &MotionField, m: &ValidMask) -> f64 {
    let (mut sum, mut n) = (0.0, 0.0);
    for y in 0..p.height() {
        for x in 0..p.width() {
            if m.get(x, y) {
                let (a, b) = (p.get(x, y), g.get(x, y));
                sum += (a[0] as f64 - b[0] as f64).hypot(a[1] as f64 - b[1] as f64);
                n += 1.0;
            }
        }
    }
    sum / n
}

fn cli(args: &[&str], workers: &str) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gyrofield"))
        .args(args)
        .env("GYROFIELD_WORKERS", workers)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())
}

fn determinism(tmp: &Path) -> Checked {
    let src = tmp.join("det_src");
    std::fs::create_dir_all(&src).unwrap();
    for i in 0..3 {
        io::write_image(src.join(format!("s{i}.png")), &natural_image(600, 800, 90 + i)).unwrap();
    }
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let synth = |name: &str, workers: &str| -> Result<_, String> {
        let out = tmp.join(name);
        cli(
            &["synth", "--src", &s(&src), "--out", &s(&out), "--count", "10", "--identity-fraction", "0.2", "--seed", "7"],
            workers,
        )?;
        Ok(snapshot(&out))
    };
    let a = synth("det_a", "1")?;
    ensure(a == synth("det_b", "1")?, || "synth differs between reruns".into())?;
    ensure(a == synth("det_c", "4")?, || "synth differs between 1 and 4 workers".into())?;

    let manifest = s(&tmp.join("det_a/manifest.jsonl"));
    let eval = |tag: &str, predictor: &str, workers: &str| -> Result<(Vec<u8>, Vec<u8>), String> {
        let (json, csv) = (tmp.join(format!("{tag}.json")), tmp.join(format!("{tag}.csv")));
        cli(
            &["eval", "--manifest", &manifest, "--predictor", predictor, "--runs", "10", "--out", &s(&json), "--csv", &s(&csv)],
            workers,
        )?;
        Ok((std::fs::read(json).unwrap(), std::fs::read(csv).unwrap()))
    };
    for predictor in ["oracle", "zero"] {
        let first = eval(&format!("{predictor}1"), predictor, "1")?;
        ensure(first == eval(&format!("{predictor}2"), predictor, "1")?, || format!("{predictor} eval differs between reruns"))?;
        ensure(first == eval(&format!("{predictor}3"), predictor, "4")?, || format!("{predictor} eval differs across workers"))?;
    }
    Ok(format!("{} files identical across reruns and 1/4 workers; oracle and zero reports identical", a.len()))
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Checked>)> = vec![
        ("SO(3) suite", Box::new(so3_suite)),
        ("IGF round trip", Box::new(|| igf_round_trip(tmp.path()))),
        ("Field inversion", Box::new(field_inversion)),
        ("Upsample vs native", Box::new(upsample_vs_native)),
        ("Diffusion suite", Box::new(diffusion_suite)),
        ("Metrics suite", Box::new(metrics_suite)),
        ("Determinism", Box::new(|| determinism(tmp.path()))),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
