/// Row-major 3×3 matrix.
pub type Mat3 = [[f64; 3]; 3];

pub const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    out
}

pub fn mul_vec(a: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    ]
}

pub fn sub(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] -= b[i][j];
        }
    }
    out
}

pub fn add(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn scale(a: &Mat3, s: f64) -> Mat3 {
    let mut out = *a;
    for row in out.iter_mut() {
        for cell in row.iter_mut() {
            *cell *= s;
        }
    }
    out
}

#[cfg(test)]
pub fn transpose(a: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn det(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Adjugate inverse; `None` when |det| ≤ `eps`.
pub fn inverse(a: &Mat3, eps: f64) -> Option<Mat3> {
    let d = det(a);
    if !(libm::fabs(d) > eps) {
        return None;
    }
    let inv_d = 1.0 / d;
    Some([
        [
            (a[1][1] * a[2][2] - a[1][2] * a[2][1]) * inv_d,
            (a[0][2] * a[2][1] - a[0][1] * a[2][2]) * inv_d,
            (a[0][1] * a[1][2] - a[0][2] * a[1][1]) * inv_d,
        ],
        [
            (a[1][2] * a[2][0] - a[1][0] * a[2][2]) * inv_d,
            (a[0][0] * a[2][2] - a[0][2] * a[2][0]) * inv_d,
            (a[0][2] * a[1][0] - a[0][0] * a[1][2]) * inv_d,
        ],
        [
            (a[1][0] * a[2][1] - a[1][1] * a[2][0]) * inv_d,
            (a[0][1] * a[2][0] - a[0][0] * a[2][1]) * inv_d,
            (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * inv_d,
        ],
    ])
}

/// Largest absolute element.
#[cfg(test)]
pub fn max_abs(a: &Mat3) -> f64 {
    a.iter()
        .flat_map(|r| r.iter())
        .fold(0.0, |m, v| if libm::fabs(*v) > m { libm::fabs(*v) } else { m })
}
