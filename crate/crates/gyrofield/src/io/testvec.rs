use std::fs;
use std::path::Path;

use gyrofield_core::{ddim_step, make_schedule, timestep_sequence, FieldTensor, NoiseSchedule};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of ᾱ probes exported.
pub const ALPHA_BAR_PROBES: usize = 32;

/// One deterministic (η = 0) DDIM update on 1-element tensors.
/// `t_prev = -1` marks the final step to the clean end of the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DdimCase {
    pub t: usize,
    pub t_prev: i64,
    pub x_t: Vec<f64>,
    pub x0_hat: Vec<f64>,
    pub expected: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVectors {
    #[serde(rename = "T")]
    pub steps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    pub alpha_bar: Vec<(usize, f64)>,
    pub ddim_cases: Vec<DdimCase>,
}

/// Evenly spread probe indices over `[0, steps)`, both ends included.
pub fn probe_indices(steps: usize) -> Vec<usize> {
    let last = steps - 1;
    let n = ALPHA_BAR_PROBES - 1;
    let mut idx: Vec<usize> = (0..=n).map(|i| (2 * last * i + n) / (2 * n)).collect();
    idx.dedup();
    idx
}

fn scalar(v: f64) -> FieldTensor {
    FieldTensor::new(1, 1, 1, vec![v]).expect("finite scalar")
}

fn step_pairs(steps: usize) -> Result<Vec<(usize, Option<usize>)>> {
    let seq = timestep_sequence(steps, 8.min(steps))?;
    let mut pairs: Vec<(usize, Option<usize>)> = seq
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, seq.get(i + 1).copied()))
        .collect();
    for (t, tp) in [(steps / 2, Some(steps / 4)), (steps - 1, Some(0)), (1, Some(0)), (steps - 1, None)] {
        if t < steps && tp.is_none_or(|tp| tp < t) && !pairs.contains(&(t, tp)) {
            pairs.push((t, tp));
        }
    }
    Ok(pairs)
}

fn ddim_expected(s: &NoiseSchedule, t: usize, t_prev: Option<usize>, x_t: f64, x0: f64) -> Result<f64> {
    Ok(ddim_step(&scalar(x_t), &scalar(x0), t, t_prev, 0.0, s, None)?.data()[0])
}

pub fn build_testvectors(steps: usize, beta_start: f64, beta_end: f64) -> Result<TestVectors> {
    let s = make_schedule(steps, beta_start, beta_end)?;
    let alpha_bar = probe_indices(steps)
        .into_iter()
        .map(|t| (t, s.alpha_bar()[t]))
        .collect();
    const XT: [f64; 4] = [1.3, -0.7, 0.25, 2.0];
    const X0: [f64; 4] = [0.4, -1.1, 0.0, 0.9];
    let ddim_cases = step_pairs(steps)?
        .into_iter()
        .enumerate()
        .map(|(j, (t, tp))| {
            let (x_t, x0) = (XT[j % 4], X0[(j + 1) % 4]);
            Ok(DdimCase {
                t,
                t_prev: tp.map_or(-1, |v| v as i64),
                x_t: vec![x_t],
                x0_hat: vec![x0],
                expected: vec![ddim_expected(&s, t, tp, x_t, x0)?],
            })
        })
        .collect::<Result<_>>()?;
    Ok(TestVectors {
        steps,
        beta_start,
        beta_end,
        alpha_bar,
        ddim_cases,
    })
}

/// Recomputes every value from the stored parameters and lists the entries
/// that differ bitwise.
pub fn verify_testvectors(tv: &TestVectors) -> Result<Vec<String>> {
    let s = make_schedule(tv.steps, tv.beta_start, tv.beta_end)?;
    let mut bad = Vec::new();
    for &(t, v) in &tv.alpha_bar {
        match s.alpha_bar().get(t) {
            Some(&ab) if ab.to_bits() == v.to_bits() => {}
            other => bad.push(format!("alpha_bar[{t}]: stored {v}, computed {other:?}")),
        }
    }
    for (i, c) in tv.ddim_cases.iter().enumerate() {
        let tp = (c.t_prev >= 0).then_some(c.t_prev as usize);
        for k in 0..c.x_t.len() {
            let got = ddim_expected(&s, c.t, tp, c.x_t[k], c.x0_hat[k])?;
            if got.to_bits() != c.expected.get(k).map_or(u64::MAX, |v| v.to_bits()) {
                bad.push(format!("ddim case {i}: stored {:?}, computed {got}", c.expected.get(k)));
            }
        }
    }
    Ok(bad)
}

pub fn write_testvectors(path: impl AsRef<Path>, tv: &TestVectors) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(tv).expect("test vectors serialize") + "\n";
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_testvectors(path: impl AsRef<Path>) -> Result<TestVectors> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::format(path, Some(e.line() as u64), e.to_string()))
}
