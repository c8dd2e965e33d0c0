//! Forecasting integrated returns when the returns themselves are serially
//! correlated.
//!
//! With `x*_t` the centered returns and `U` the one-step innovations of the
//! innovations algorithm, the next-`T` sum splits exactly as
//!
//! ```text
//! sum_{h=1}^T x*_{N+h} = sum_{j=1}^{n} c_j U_{N+1-j}  +  sum_{k=1}^{T} w_k U_{N+k}
//! c_j = sum_{h=1}^T theta_{n+h-1, j+h-1}
//! w_k = sum_{l=0}^{T-k} theta_{n+k+l-1, l}          (theta_{.,0} = 1)
//! ```
//!
//! The first term is the linear forecast from the window and is known at the
//! origin. The second is a weighted sum of future innovations, which are
//! approximately the uncorrelated volatility-model returns; its law is
//! bootstrapped with the same magnitude/sign scheme as the uncorrelated case,
//! applied to the in-sample one-step residuals.

use crate::distribution::EmpiricalDistribution;
use crate::error::{Error, Result};
use crate::forecast::{BootstrapPlan, ForecastConfig, MagnitudeDecomposition, MagnitudeModel};
use crate::linpred::{
    innovations_coefficients, one_step_predict, sample_autocovariance, InnovationsSolution,
    PredictorWindow,
};
use crate::scalar::Scalar;
use crate::series::ReturnSeries;

/// One-step residuals `z_t = x*_t - xhat_t` of a centered series.
#[derive(Debug, Clone, PartialEq)]
pub struct InnovationResiduals<T: Scalar> {
    pub mean: T,
    /// `z_1..z_N`.
    pub residuals: Vec<T>,
    /// Centered one-step predictions `xhat*_1..xhat*_N`.
    pub fitted: Vec<T>,
}

/// Residuals from predictors over the previous `min(t - 1, n)` points; the
/// first point is predicted by zero.
pub fn innovation_residuals<T: Scalar>(series: &ReturnSeries<T>, n: usize) -> Result<InnovationResiduals<T>> {
    if n == 0 {
        return Err(Error::param("window", "must be >= 1"));
    }
    if series.len() <= n {
        return Err(Error::InsufficientData {
            what: "innovation residuals",
            needed: n + 1,
            available: series.len(),
        });
    }
    let mean = series.mean();
    let centered: Vec<T> = series.values().iter().map(|&x| x - mean).collect();
    let sol = innovations_coefficients(&sample_autocovariance(&centered, n)?, n)?;
    let (residuals, fitted) = residuals_with(&sol, &centered, n)?;
    Ok(InnovationResiduals {
        mean,
        residuals,
        fitted,
    })
}

fn residuals_with<T: Scalar>(
    sol: &InnovationsSolution<T>,
    centered: &[T],
    n: usize,
) -> Result<(Vec<T>, Vec<T>)> {
    let mut residuals = Vec::with_capacity(centered.len());
    let mut fitted = Vec::with_capacity(centered.len());
    for (t, &x) in centered.iter().enumerate() {
        let start = t.saturating_sub(n);
        let pred = if t == 0 {
            T::zero()
        } else {
            one_step_predict(sol, &PredictorWindow::new(sol, &centered[start..t])?)
        };
        fitted.push(pred);
        residuals.push(x - pred);
    }
    Ok((residuals, fitted))
}

/// Linear-forecast term and future-innovation weights at one origin.
#[derive(Debug, Clone, PartialEq)]
pub struct SerialDecomposition<T: Scalar> {
    /// Linear forecast of the centered `T`-period sum from the window.
    pub t_term: T,
    /// `c_j`, j = 1..=n: weight on the window innovation `j - 1` steps back.
    pub window_weights: Vec<T>,
    /// Innovations of the window, oldest first.
    pub window_innovations: Vec<T>,
    /// `w_k`, k = 1..=T: weight on the `k`-th future innovation.
    pub group_weights: Vec<T>,
}

impl<T: Scalar> SerialDecomposition<T> {
    /// `sum_k w_k U_{N+k}` for given future innovations.
    pub fn innovation_term(&self, future_innovations: &[T]) -> Result<T> {
        if future_innovations.len() != self.group_weights.len() {
            return Err(Error::param(
                "future_innovations",
                format!(
                    "expected {} values, got {}",
                    self.group_weights.len(),
                    future_innovations.len()
                ),
            ));
        }
        Ok(self
            .group_weights
            .iter()
            .zip(future_innovations)
            .map(|(&w, &u)| w * u)
            .sum())
    }
}

/// Decomposition at origin `N = centered.len()` for window `n` and horizon
/// `horizon`. `sol` needs rows up to `n + horizon - 1`.
pub fn decompose_integrated<T: Scalar>(
    centered: &[T],
    n: usize,
    horizon: usize,
    sol: &InnovationsSolution<T>,
) -> Result<SerialDecomposition<T>> {
    if n == 0 || horizon == 0 {
        return Err(Error::param("window", "window and horizon must be >= 1"));
    }
    if centered.len() < n {
        return Err(Error::InsufficientData {
            what: "predictor window",
            needed: n,
            available: centered.len(),
        });
    }
    if sol.n_max() + 1 < n + horizon {
        return Err(Error::OutOfRange {
            what: "window plus horizon",
            value: n + horizon - 1,
            max: sol.n_max(),
        });
    }
    let window = PredictorWindow::new(sol, &centered[centered.len() - n..])?;
    let window_innovations = window.innovations();
    let window_weights: Vec<T> = (1..=n)
        .map(|j| (1..=horizon).map(|h| sol.theta(n + h - 1, j + h - 1)).sum())
        .collect();
    let t_term = window_weights
        .iter()
        .enumerate()
        .map(|(j, &c)| c * window_innovations[n - 1 - j])
        .sum();
    let group_weights = (1..=horizon)
        .map(|k| (0..=horizon - k).map(|l| sol.theta(n + k + l - 1, l)).sum())
        .collect();
    Ok(SerialDecomposition {
        t_term,
        window_weights,
        window_innovations,
        group_weights,
    })
}

/// Future innovations `U_{N+1..N+T}` implied by realized values: runs the
/// window recursion over `window ++ future`. `sol` needs rows up to
/// `n + T`.
pub fn realized_innovations<T: Scalar>(
    sol: &InnovationsSolution<T>,
    window: &[T],
    future: &[T],
) -> Result<Vec<T>> {
    let joined: Vec<T> = window.iter().chain(future).copied().collect();
    let innov = PredictorWindow::new(sol, &joined)?.innovations();
    Ok(innov[window.len()..].to_vec())
}

/// Forecast distribution of the next-`T` integrated return for serially
/// correlated returns:
/// `T mu + t_term + sum_k w_k (mhat_k + W_k) sign_k`, where magnitudes and
/// error pools come from the absolute one-step residuals.
pub fn prepare_correlated_forecast<T: Scalar>(
    series: &ReturnSeries<T>,
    cfg: &ForecastConfig<T>,
) -> Result<BootstrapPlan<T>> {
    let (n, horizon) = (cfg.window, cfg.horizon);
    if n == 0 || horizon == 0 {
        return Err(Error::param("window", "window and horizon must be >= 1"));
    }
    if series.len() <= n {
        return Err(Error::InsufficientData {
            what: "innovation residuals",
            needed: n + 1,
            available: series.len(),
        });
    }
    // residual magnitudes start after the first full window
    cfg.validate(series.len() - n)?;
    let mu_hat = series.mean();
    let centered: Vec<T> = series.values().iter().map(|&x| x - mu_hat).collect();
    let order = n + horizon - 1;
    let sol = innovations_coefficients(&sample_autocovariance(&centered, order)?, order)?;
    let (residuals, _) = residuals_with(&sol, &centered, n)?;
    let decomp = decompose_integrated(&centered, n, horizon, &sol)?;

    let steady = &residuals[n..];
    let resid = MagnitudeDecomposition::from_values(steady, T::zero());
    let model = MagnitudeModel::fit(&resid.magnitudes, n, horizon, cfg.clip_nonneg)?;
    let pools = model.error_pools(&resid.magnitudes)?;
    let point = model.predict(&resid.magnitudes[resid.len() - n..])?;
    let signs = cfg.signs.resolve(steady)?;
    Ok(BootstrapPlan::new(
        T::from_count(horizon) * mu_hat + decomp.t_term,
        decomp.group_weights,
        point,
        pools,
        signs,
        cfg.resampling,
    ))
}

pub fn forecast_correlated_distribution<T: Scalar>(
    series: &ReturnSeries<T>,
    cfg: &ForecastConfig<T>,
) -> Result<EmpiricalDistribution<T>> {
    prepare_correlated_forecast(series, cfg)?.sample(cfg.draws, cfg.seed)
}
