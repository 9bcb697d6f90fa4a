//! Linearization of the autonomous system about its critical point.
//!
//! Perturbations `(δτ, δβ, δα) = v·e^{qt}` solve `M(q)·v = 0` with
//!
//! ```text
//!        ⎡ q(q+5)    0     q+3    ⎤
//! M(q) = ⎢ q(q−1)    6     4(q−3) ⎥
//!        ⎣   0      q−4    4      ⎦
//! ```
//!
//! and `det M(q) = −3q(q−1)(q² − q − 36)`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Matrix3 = [[f64; 3]; 3];

/// One growth rate and its null vector `(δτ₀, δβ₀, δα₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenmode {
    pub q: f64,
    pub v: [f64; 3],
}

pub fn stability_matrix(q: f64) -> Matrix3 {
    [
        [q * (q + 5.0), 0.0, q + 3.0],
        [q * (q - 1.0), 6.0, 4.0 * (q - 3.0)],
        [0.0, q - 4.0, 4.0],
    ]
}

pub fn det3(m: &Matrix3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Factored form of `det M(q)`.
pub fn characteristic_polynomial(q: f64) -> f64 {
    -3.0 * q * (q - 1.0) * (q * q - q - 36.0)
}

/// The four roots of `det M(q)`, ascending: `(1−√145)/2, 0, 1, (1+√145)/2`.
pub fn characteristic_roots() -> [f64; 4] {
    let r = 145f64.sqrt();
    let roots = [0.5 * (1.0 - r), 0.0, 1.0, 0.5 * (1.0 + r)];
    for &q in &roots {
        let m = stability_matrix(q);
        debug_assert!(det3(&m).abs() <= 1e-10 * matrix_scale(&m).powi(3));
    }
    roots
}

fn matrix_scale(m: &Matrix3) -> f64 {
    m.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs())).max(1.0)
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn apply(m: &Matrix3, v: &[f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

/// Null vector of `M(q)`, scaled so that `δα₀ = 1` (or `δτ₀ = 1` when the
/// α-component vanishes).
pub fn eigenmode(q: f64) -> Result<Eigenmode> {
    let m = stability_matrix(q);
    let scale = matrix_scale(&m);
    let det = det3(&m);
    if det.abs() > 1e-9 * scale.powi(3) {
        return Err(Error::NotARoot { q, det });
    }
    // For a rank-2 matrix the null space is spanned by the cross product of
    // any two independent rows; take the best-conditioned pair.
    let v = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| cross(&m[i], &m[j]))
        .max_by(|a, b| norm(a).total_cmp(&norm(b)))
        .unwrap();
    let n = norm(&v);
    if n <= 1e-12 * scale * scale {
        return Err(Error::Eigen(format!("M({q}) has rank below 2")));
    }
    let pivot = if v[2].abs() > 1e-10 * n { v[2] } else { v[0] };
    Ok(Eigenmode { q, v: v.map(|x| x / pivot) })
}

/// The unique decaying mode; it spans the tangent of the stable manifold.
pub fn stable_mode() -> Eigenmode {
    let q = characteristic_roots()[0];
    eigenmode(q).expect("q3 is a root")
}
