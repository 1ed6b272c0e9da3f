//! Independent reference implementations used across the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;

/// Pfaffian by expansion over perfect matchings along the first row.
pub fn pfaffian_matchings(a: &DMatrix<f64>) -> f64 {
    let idx: Vec<usize> = (0..a.nrows()).collect();
    expand(a, &idx)
}

fn expand(a: &DMatrix<f64>, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    if idx.len() % 2 == 1 {
        return 0.0;
    }
    let first = idx[0];
    let mut total = 0.0;
    for k in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&i| i != idx[k]).collect();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * a[(first, idx[k])] * expand(a, &rest);
    }
    total
}

pub fn random_skew<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let v: f64 = rng.random_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

/// Complete elliptic integral of the second kind `E(m)`, parameter convention,
/// by the arithmetic-geometric mean.
pub fn elliptic_e(m: f64) -> f64 {
    let (mut a, mut b) = (1.0f64, (1.0 - m).sqrt());
    let mut c = m.sqrt();
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    for _ in 0..64 {
        if c.abs() < 1e-17 {
            break;
        }
        let an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    let k = PI / (2.0 * a);
    k * (1.0 - sum)
}

/// `-(1/pi) int_0^pi sqrt(1 + s cos q) dq` with `s = sin 2 phi`, in closed form.
pub fn energy_closed_form(phi: f64) -> f64 {
    let s = (2.0 * phi).sin();
    if s == 0.0 {
        return -1.0;
    }
    let m = 2.0 * s / (1.0 + s);
    -(2.0 / PI) * (1.0 + s).sqrt() * elliptic_e(m)
}

/// `G_r` by the periodic trapezoid rule on `[0, 2 pi)`, which converges
/// geometrically for gapped angles.
pub fn g_trapezoid(n: usize, phi: f64, r: i64, points: usize) -> f64 {
    let (s, c) = phi.sin_cos();
    let p = (n + 1) as f64;
    let mut acc = 0.0;
    for l in 0..points {
        let k = 2.0 * PI * (l as f64 + 0.5) / points as f64;
        let w = (1.0 + (p * k).cos() * (2.0 * phi).sin()).sqrt();
        acc += (c * (k * (p + r as f64)).cos() + s * (k * r as f64).cos()) / w;
    }
    acc / points as f64
}

/// `G` at the critical angle: `(-1)^m / (pi (m + 1/2))` for `r = m (n+1)`.
pub fn g_critical(n: usize, r: i64) -> f64 {
    let p = n as i64 + 1;
    if r.rem_euclid(p) != 0 {
        return 0.0;
    }
    let m = r / p;
    let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign / (PI * (m as f64 + 0.5))
}

pub fn dense_det(m: &DMatrix<f64>) -> f64 {
    m.clone().lu().determinant()
}

/// von Neumann entropy in bits of a real symmetric density matrix.
pub fn entropy_bits(rho: &DMatrix<f64>) -> f64 {
    rho.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .filter(|&&p| p > 1e-15)
        .map(|&p| -p * p.log2())
        .sum()
}
