//! Distribution forecasts for long-horizon integrated returns under
//! time-varying volatility.
//!
//! The forecasts are model-free: centered returns are split into magnitudes
//! and signs, magnitudes are predicted linearly (innovations algorithm) with
//! resampled prediction errors, and signs are drawn at random. The resulting
//! bootstrap sample of the next-`T` return sum feeds VaR and CTE estimates.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the usual double-precision instantiation.

// `!(x > 0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backtest;
pub mod distribution;
pub mod error;
pub mod forecast;
pub mod linpred;
pub mod parallel;
pub mod risk;
pub mod rng;
pub mod scalar;
pub mod serial;
pub mod series;
pub mod signs;
pub mod sim;

pub use backtest::{
    rolling_backtest, rolling_backtest_with, BacktestConfig, BacktestResult, ForecastMode,
    Forecaster, PipelineForecaster,
};
pub use distribution::EmpiricalDistribution;
pub use error::{Error, Result};
pub use forecast::{
    build_error_pools, forecast_distribution, magnitude_sign_split, prepare_forecast,
    BootstrapPlan, ErrorPools, ErrorResampling, ForecastConfig, MagnitudeDecomposition, MagnitudeModel, SignSpec,
};
pub use linpred::{
    default_window, h_step_predict, innovations_coefficients, one_step_predict,
    sample_autocovariance, AutocovarianceTable, InnovationsSolution, PredictorWindow,
};
pub use parallel::with_threads;
pub use risk::{conditional_tail_expectation, risk_report, value_at_risk, RiskReport};
pub use scalar::Scalar;
pub use serial::{
    decompose_integrated, forecast_correlated_distribution, innovation_residuals,
    prepare_correlated_forecast, realized_innovations, InnovationResiduals, SerialDecomposition,
};
pub use series::ReturnSeries;
pub use signs::{fit_sign_model, sample_signs, SignModel};
pub use sim::{
    garch_ma_coefficients, simulate_garch, simulate_sv, GarchParams, GarchPath, Shock, SvParams,
    SvPath,
};

pub type ReturnSeries64 = ReturnSeries<f64>;
pub type EmpiricalDistribution64 = EmpiricalDistribution<f64>;
pub type ForecastConfig64 = ForecastConfig<f64>;
pub type InnovationsSolution64 = InnovationsSolution<f64>;
pub type AutocovarianceTable64 = AutocovarianceTable<f64>;
pub type SignModel64 = SignModel<f64>;
pub type SvParams64 = SvParams<f64>;
pub type GarchParams64 = GarchParams<f64>;
pub type RiskReport64 = RiskReport<f64>;
pub type BacktestResult64 = BacktestResult<f64>;

pub type ReturnSeries32 = ReturnSeries<f32>;
pub type EmpiricalDistribution32 = EmpiricalDistribution<f32>;
pub type ForecastConfig32 = ForecastConfig<f32>;
