//! Test-only oracles, independent of the library's numerical paths.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn normal(r: &mut ChaCha20Rng) -> f64 {
    r.sample(StandardNormal)
}

/// Powered-exponential kernel written out directly from its formula.
pub fn naive_kernel(sigma2: f64, beta: f64, l: &[f64], alpha: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..a.len() {
        s += ((a[k] - b[k]).abs() / l[k]).powf(alpha[k]);
    }
    sigma2 * (-beta * s).exp()
}

pub fn min_eigenvalue(rows: usize, data: &[f64]) -> f64 {
    let m = DMatrix::from_row_slice(rows, rows, data);
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Posterior mean and covariance through an explicit dense inverse.
pub fn dense_gp_posterior(
    k_xx: &DMatrix<f64>,
    k_sx: &DMatrix<f64>,
    k_ss: &DMatrix<f64>,
    noise2: f64,
    y: &[f64],
) -> (DVector<f64>, DMatrix<f64>) {
    let n = k_xx.nrows();
    let inv = (k_xx + DMatrix::identity(n, n) * noise2)
        .try_inverse()
        .expect("invertible");
    let mean = k_sx * &inv * DVector::from_column_slice(y);
    let cov = k_ss - k_sx * &inv * k_sx.transpose();
    (mean, cov)
}

/// AR(1) path `x_t = φ x_{t−1} + e_t` after a burn-in.
pub fn simulate_ar1(phi: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let mut x = 0.0;
    for _ in 0..500 {
        x = phi * x + normal(&mut r);
    }
    (0..n)
        .map(|_| {
            x = phi * x + normal(&mut r);
            x
        })
        .collect()
}

/// MA(1) path `x_t = e_t + θ e_{t−1}`.
pub fn simulate_ma1(theta: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let mut prev = normal(&mut r);
    (0..n)
        .map(|_| {
            let e = normal(&mut r);
            let x = e + theta * prev;
            prev = e;
            x
        })
        .collect()
}

pub fn white(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| normal(&mut r)).collect()
}

pub fn sample_variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)
}

pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}
