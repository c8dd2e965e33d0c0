//! Oracles shared by the integration tests. Nothing here calls into the
//! prediction code paths it is used to check.
#![allow(dead_code)]

use horizon_core::rng::{substream, Purpose};
use horizon_core::sim::{GarchSimulator, SvSimulator};
use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

/// Autocovariances of a stationary AR(1) with unit innovation variance.
pub fn ar1_acov(phi: f64, max_lag: usize) -> Vec<f64> {
    let g0 = 1.0 / (1.0 - phi * phi);
    (0..=max_lag).map(|h| g0 * phi.powi(h as i32)).collect()
}

/// Autocovariances of an MA(1) with unit innovation variance.
pub fn ma1_acov(theta: f64, max_lag: usize) -> Vec<f64> {
    let mut g = vec![0.0; max_lag + 1];
    g[0] = 1.0 + theta * theta;
    if max_lag >= 1 {
        g[1] = theta;
    }
    g
}

/// Best linear predictor of `x_{n+h}` from `x_1..x_n` by solving the Toeplitz
/// normal equations `Gamma a = (gamma(n+h-1), .., gamma(h))` with a dense LU.
pub fn projection_predict(gamma: &[f64], window: &[f64], h: usize) -> f64 {
    let n = window.len();
    let big = DMatrix::from_fn(n, n, |i, j| gamma[i.abs_diff(j)]);
    // coefficient on x_{i+1} pairs with lag n + h - (i + 1)
    let rhs = DVector::from_fn(n, |i, _| gamma[n + h - i - 1]);
    let a = big.lu().solve(&rhs).expect("nonsingular Toeplitz matrix");
    a.iter().zip(window).map(|(c, x)| c * x).sum()
}

/// `x_t = phi x_{t-1} + e_t`, started at zero.
pub fn ar1_filter(innovations: &[f64], phi: f64) -> Vec<f64> {
    let mut prev = 0.0;
    innovations
        .iter()
        .map(|&e| {
            prev = phi * prev + e;
            prev
        })
        .collect()
}

pub fn standard_normals(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, Purpose::Simulation, 99);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

pub fn sample_mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Pearson correlation of two equal-length slices.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (sample_mean(a), sample_mean(b));
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

/// Lag-`k` sample autocorrelation.
pub fn autocorrelation(xs: &[f64], k: usize) -> f64 {
    let m = sample_mean(xs);
    let denom: f64 = xs.iter().map(|x| (x - m).powi(2)).sum();
    let num: f64 = xs[..xs.len() - k]
        .iter()
        .zip(&xs[k..])
        .map(|(a, b)| (a - m) * (b - m))
        .sum();
    num / denom
}

/// Sorts a copy and returns the `ceil(p n)`-th order statistic.
pub fn order_quantile(xs: &[f64], p: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = ((p * v.len() as f64).ceil() as usize).max(1);
    v[k - 1]
}

/// `paths` continuations of `T` steps from a GARCH state; returns the sums.
pub fn garch_continuation_sums(state: &GarchSimulator<f64>, horizon: usize, paths: usize, seed: u64) -> Vec<f64> {
    (0..paths as u64)
        .map(|i| {
            let mut st = state.clone();
            let mut rng = substream(seed, Purpose::Continuation, i);
            (0..horizon).map(|_| st.step(&mut rng).0).sum()
        })
        .collect()
}

pub fn sv_continuation_sums(state: &SvSimulator<f64>, horizon: usize, paths: usize, seed: u64) -> Vec<f64> {
    (0..paths as u64)
        .map(|i| {
            let mut st = state.clone();
            let mut rng = substream(seed, Purpose::Continuation, i);
            (0..horizon).map(|_| st.step(&mut rng).0).sum()
        })
        .collect()
}

/// Standardized skew-normal draws (zero mean, unit variance) with shape
/// `alpha`, via the `delta |z0| + sqrt(1 - delta^2) z1` construction.
pub fn skew_normal_shocks(n: usize, alpha: f64, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, Purpose::Simulation, 7);
    let delta = alpha / (1.0 + alpha * alpha).sqrt();
    let mean = delta * (2.0 / std::f64::consts::PI).sqrt();
    let sd = (1.0 - mean * mean).sqrt();
    (0..n)
        .map(|_| {
            let z0: f64 = StandardNormal.sample(&mut rng);
            let z1: f64 = StandardNormal.sample(&mut rng);
            (delta * z0.abs() + (1.0 - delta * delta).sqrt() * z1 - mean) / sd
        })
        .collect()
}

/// Two-sample KS distance, computed independently of the library.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut pooled: Vec<f64> = a.iter().chain(&b).copied().collect();
    pooled.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pooled
        .iter()
        .map(|&x| {
            let fa = a.partition_point(|&v| v <= x) as f64 / a.len() as f64;
            let fb = b.partition_point(|&v| v <= x) as f64 / b.len() as f64;
            (fa - fb).abs()
        })
        .fold(0.0, f64::max)
}
