//! Rolling-origin evaluation of VaR forecasts.

use rayon::prelude::*;

use crate::distribution::EmpiricalDistribution;
use crate::error::{Error, Result};
use crate::forecast::{forecast_distribution, ForecastConfig};
use crate::risk::value_at_risk;
use crate::rng::{derive_seed, Purpose};
use crate::scalar::Scalar;
use crate::serial::forecast_correlated_distribution;
use crate::series::ReturnSeries;

/// Fewest origins a backtest accepts.
pub const MIN_ORIGINS: usize = 10;

/// Which forecasting pipeline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ForecastMode {
    /// Returns are serially uncorrelated.
    #[default]
    WhiteNoise,
    /// Returns follow an invertible linear filter of uncorrelated returns.
    Correlated,
}

impl ForecastMode {
    pub fn forecast<T: Scalar>(
        &self,
        history: &ReturnSeries<T>,
        cfg: &ForecastConfig<T>,
    ) -> Result<EmpiricalDistribution<T>> {
        match self {
            ForecastMode::WhiteNoise => forecast_distribution(history, cfg),
            ForecastMode::Correlated => forecast_correlated_distribution(history, cfg),
        }
    }
}

/// Anything that maps a history to a forecast distribution of the next-`T`
/// integrated return.
pub trait Forecaster<T: Scalar>: Sync {
    fn forecast(&self, history: &ReturnSeries<T>, seed: u64) -> Result<EmpiricalDistribution<T>>;
}

/// A pipeline plus its settings; the per-origin seed replaces `cfg.seed`.
#[derive(Debug, Clone)]
pub struct PipelineForecaster<T: Scalar> {
    pub mode: ForecastMode,
    pub cfg: ForecastConfig<T>,
}

impl<T: Scalar> Forecaster<T> for PipelineForecaster<T> {
    fn forecast(&self, history: &ReturnSeries<T>, seed: u64) -> Result<EmpiricalDistribution<T>> {
        let cfg = ForecastConfig {
            seed,
            ..self.cfg.clone()
        };
        self.mode.forecast(history, &cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BacktestConfig {
    /// VaR level `p`.
    pub level: f64,
    /// Distance between consecutive origins.
    pub stride: usize,
    /// Observations before each origin used for fitting.
    pub train: usize,
    /// Horizon `T` of the realized sums.
    pub horizon: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BacktestResult<T: Scalar> {
    /// Origins as observation counts: the forecast at origin `t0` uses
    /// observations `t0 - train .. t0` (0-based, exclusive end).
    pub origins: Vec<usize>,
    pub var: Vec<T>,
    pub realized: Vec<T>,
    /// Realized sum at or below the VaR.
    pub hits: Vec<bool>,
    pub coverage: f64,
    pub expected: f64,
    /// `(coverage - p) / sqrt(p (1 - p) / K)`; assumes independent origins.
    pub z_score: f64,
    /// Maximal runs of consecutive hits.
    pub hit_runs: usize,
    pub longest_run: usize,
}

impl<T: Scalar> BacktestResult<T> {
    pub fn len(&self) -> usize {
        self.origins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origins.is_empty()
    }
}

fn origins(len: usize, cfg: &BacktestConfig) -> Result<Vec<usize>> {
    if cfg.stride == 0 {
        return Err(Error::param("stride", "must be >= 1"));
    }
    if cfg.horizon == 0 {
        return Err(Error::param("horizon", "must be >= 1"));
    }
    if cfg.train == 0 {
        return Err(Error::param("train", "must be >= 1"));
    }
    if !(cfg.level > 0.0 && cfg.level < 1.0) {
        return Err(Error::param("level", format!("must lie in (0, 1), got {}", cfg.level)));
    }
    let out: Vec<usize> = (cfg.train..)
        .step_by(cfg.stride)
        .take_while(|&t0| t0 + cfg.horizon <= len)
        .collect();
    if out.len() < MIN_ORIGINS {
        return Err(Error::InsufficientData {
            what: "backtest origins",
            needed: cfg.train + (MIN_ORIGINS - 1) * cfg.stride + cfg.horizon,
            available: len,
        });
    }
    Ok(out)
}

/// Replays `series`, forecasting at every origin with `forecaster`.
pub fn rolling_backtest_with<T: Scalar, F: Forecaster<T>>(
    series: &ReturnSeries<T>,
    cfg: &BacktestConfig,
    forecaster: &F,
) -> Result<BacktestResult<T>> {
    let origins = origins(series.len(), cfg)?;
    let values = series.values();
    let rows: Vec<(T, T)> = origins
        .par_iter()
        .map(|&t0| {
            let history = ReturnSeries::new(values[t0 - cfg.train..t0].to_vec())?;
            let seed = derive_seed(cfg.seed, Purpose::Backtest, t0 as u64);
            let dist = forecaster.forecast(&history, seed)?;
            let var = value_at_risk(&dist, cfg.level)?;
            let realized: T = values[t0..t0 + cfg.horizon].iter().copied().sum();
            Ok((var, realized))
        })
        .collect::<Result<_>>()?;
    let (var, realized): (Vec<T>, Vec<T>) = rows.into_iter().unzip();
    let hits: Vec<bool> = realized.iter().zip(&var).map(|(r, v)| r <= v).collect();

    let k = hits.len() as f64;
    let coverage = hits.iter().filter(|&&h| h).count() as f64 / k;
    let p = cfg.level;
    let z_score = (coverage - p) / (p * (1.0 - p) / k).sqrt();
    let (mut hit_runs, mut longest_run, mut current) = (0, 0, 0);
    for &h in &hits {
        if h {
            current += 1;
            if current == 1 {
                hit_runs += 1;
            }
            longest_run = longest_run.max(current);
        } else {
            current = 0;
        }
    }
    Ok(BacktestResult {
        origins,
        var,
        realized,
        hits,
        coverage,
        expected: p,
        z_score,
        hit_runs,
        longest_run,
    })
}

/// Backtest of one of the built-in pipelines. `cfg.horizon` and `cfg.seed`
/// must agree with the forecast settings.
pub fn rolling_backtest<T: Scalar>(
    series: &ReturnSeries<T>,
    forecast: &ForecastConfig<T>,
    cfg: &BacktestConfig,
    mode: ForecastMode,
) -> Result<BacktestResult<T>> {
    if forecast.horizon != cfg.horizon {
        return Err(Error::param(
            "horizon",
            format!(
                "forecast horizon {} differs from backtest horizon {}",
                forecast.horizon, cfg.horizon
            ),
        ));
    }
    let forecaster = PipelineForecaster {
        mode,
        cfg: forecast.clone(),
    };
    rolling_backtest_with(series, cfg, &forecaster)
}
