/// Mean and population standard deviation of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// `None` for an empty slice. Deviations are taken from the first value,
    /// so a constant sample has a standard deviation of exactly 0.
    pub fn of(values: &[f64]) -> Option<Self> {
        let first = *values.first()?;
        let n = values.len() as f64;
        let (mut s1, mut s2) = (0.0, 0.0);
        for v in values {
            let d = v - first;
            s1 += d;
            s2 += d * d;
        }
        let m = s1 / n;
        let var = (s2 / n - m * m).max(0.0);
        Some(Self {
            mean: first + m,
            std: libm::sqrt(var),
        })
    }
}
