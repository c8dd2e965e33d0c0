//! Bootstrap forecast of the integrated return `R = r_{N+1} + .. + r_{N+T}`.
//!
//! Centered returns are split into magnitudes and signs. Conditional on the
//! magnitudes, the signs of a symmetric-shock volatility model are iid
//! Rademacher, so only the magnitudes need forecasting. Each future magnitude
//! is approximated by its linear prediction from the last `n` magnitudes plus
//! an error resampled from the pool of in-sample prediction errors at the same
//! horizon; a fresh random sign is attached to every term.

use rand::Rng;
use rayon::prelude::*;

use crate::distribution::EmpiricalDistribution;
use crate::error::{Error, Result};
use crate::linpred::{
    h_step_centered, innovations_coefficients, sample_autocovariance, InnovationsSolution,
    PredictorWindow,
};
use crate::rng::{substream, Purpose};
use crate::scalar::{mean, Scalar};
use crate::series::ReturnSeries;
use crate::signs::{default_lambda, fit_sign_model, SignModel};

/// Default number of bootstrap draws.
pub const DEFAULT_DRAWS: usize = 10_000;

/// Smallest error pool a forecast will resample from.
pub const DEFAULT_MIN_POOL: usize = 20;

/// Magnitudes `|r_t - mu|` and signs of the centered returns.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeDecomposition<T: Scalar> {
    pub mu_hat: T,
    pub magnitudes: Vec<T>,
    /// +1 or -1; a zero deviation gets +1.
    pub signs: Vec<T>,
}

impl<T: Scalar> MagnitudeDecomposition<T> {
    pub fn from_values(values: &[T], mu_hat: T) -> Self {
        let (magnitudes, signs) = values
            .iter()
            .map(|&r| {
                let d = r - mu_hat;
                let s = if d < T::zero() { -T::one() } else { T::one() };
                (d.abs(), s)
            })
            .unzip();
        Self {
            mu_hat,
            magnitudes,
            signs,
        }
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    /// Sample mean of the magnitudes.
    pub fn magnitude_mean(&self) -> T {
        mean(&self.magnitudes)
    }

    /// `m_t * s_t`, the centered returns.
    pub fn deviations(&self) -> Vec<T> {
        self.magnitudes
            .iter()
            .zip(&self.signs)
            .map(|(&m, &s)| m * s)
            .collect()
    }
}

/// Splits `r_t - mu_hat` into magnitude and sign.
pub fn magnitude_sign_split<T: Scalar>(series: &ReturnSeries<T>, mu_hat: T) -> MagnitudeDecomposition<T> {
    MagnitudeDecomposition::from_values(series.values(), mu_hat)
}

/// In-sample `h`-step magnitude prediction errors for `h = 1..=T`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorPools<T: Scalar> {
    pools: Vec<Vec<T>>,
    window: usize,
}

impl<T: Scalar> ErrorPools<T> {
    /// Errors at horizon `h` (1-based).
    pub fn pool(&self, h: usize) -> &[T] {
        &self.pools[h - 1]
    }

    pub fn horizon(&self) -> usize {
        self.pools.len()
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.pools.iter().map(Vec::len).collect()
    }

    pub fn min_size(&self) -> usize {
        self.pools.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Draws one error from pool `h` uniformly.
    pub fn resample<R: Rng + ?Sized>(&self, h: usize, rng: &mut R) -> T {
        let pool = &self.pools[h - 1];
        pool[rng.random_range(0..pool.len())]
    }

    /// Number of origins that have an error at every horizon. Entry `i` of
    /// every pool comes from the same origin for `i` below this count.
    pub fn joint_len(&self) -> usize {
        self.pools.last().map_or(0, Vec::len)
    }

    /// The error vector `(e_1, .., e_T)` of one uniformly chosen origin.
    pub fn resample_joint<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        let i = rng.random_range(0..self.joint_len());
        self.pools.iter().map(|p| p[i]).collect()
    }
}

/// How future magnitude errors are drawn from the pools.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorResampling {
    /// One historical origin per draw supplies the errors at every horizon,
    /// which keeps the cross-horizon covariance of the errors.
    #[default]
    Joint,
    /// Each horizon draws from its own pool independently.
    Independent,
}

/// Linear predictor for a nonnegative magnitude series.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeModel<T: Scalar> {
    mean: T,
    solution: InnovationsSolution<T>,
    window: usize,
    horizon: usize,
    clip_nonneg: bool,
}

impl<T: Scalar> MagnitudeModel<T> {
    /// Fits the innovations solution to the sample autocovariances of
    /// `magnitudes`, with enough rows for `horizon` steps past an `window`-long
    /// window. A constant series is predicted by its mean.
    pub fn fit(magnitudes: &[T], window: usize, horizon: usize, clip_nonneg: bool) -> Result<Self> {
        check_window(magnitudes.len(), window, horizon)?;
        let order = window + horizon - 1;
        let acov = sample_autocovariance(magnitudes, order)?;
        let solution = if acov.gamma(0) > T::zero() {
            innovations_coefficients(&acov, order)?
        } else {
            InnovationsSolution::white_noise(T::zero(), order)
        };
        Ok(Self {
            mean: mean(magnitudes),
            solution,
            window,
            horizon,
            clip_nonneg,
        })
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    pub fn solution(&self) -> &InnovationsSolution<T> {
        &self.solution
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Predictions for `h = 1..=horizon` past the end of `recent`, which must
    /// hold exactly `window` raw (uncentered) magnitudes.
    pub fn predict(&self, recent: &[T]) -> Result<Vec<T>> {
        let innov = self.window_innovations(recent)?;
        (1..=self.horizon)
            .map(|h| self.finish(h_step_centered(&self.solution, &innov, h)?))
            .collect()
    }

    fn window_innovations(&self, recent: &[T]) -> Result<Vec<T>> {
        if recent.len() != self.window {
            return Err(Error::param(
                "window",
                format!("expected {} values, got {}", self.window, recent.len()),
            ));
        }
        let centered: Vec<T> = recent.iter().map(|&m| m - self.mean).collect();
        Ok(PredictorWindow::new(&self.solution, &centered)?.innovations())
    }

    fn finish(&self, centered: T) -> Result<T> {
        let p = centered + self.mean;
        Ok(if self.clip_nonneg { p.max(T::zero()) } else { p })
    }

    /// Pools of `m_{t+h} - mhat_{t,h}` over every origin `t` (1-based, the
    /// last window index) from `window` to `N - h`.
    pub fn error_pools(&self, magnitudes: &[T]) -> Result<ErrorPools<T>> {
        let n = magnitudes.len();
        check_window(n, self.window, self.horizon)?;
        let mut pools: Vec<Vec<T>> = (1..=self.horizon)
            .map(|h| Vec::with_capacity(n + 1 - self.window - h))
            .collect();
        for end in self.window..n {
            let innov = self.window_innovations(&magnitudes[end - self.window..end])?;
            for h in 1..=self.horizon.min(n - end) {
                let pred = self.finish(h_step_centered(&self.solution, &innov, h)?)?;
                pools[h - 1].push(magnitudes[end + h - 1] - pred);
            }
        }
        Ok(ErrorPools {
            pools,
            window: self.window,
        })
    }
}

fn check_window(len: usize, window: usize, horizon: usize) -> Result<()> {
    if window == 0 {
        return Err(Error::param("window", "must be >= 1"));
    }
    if horizon == 0 {
        return Err(Error::param("horizon", "must be >= 1"));
    }
    if len < window + horizon {
        return Err(Error::InsufficientData {
            what: "window plus horizon",
            needed: window + horizon,
            available: len,
        });
    }
    Ok(())
}

/// Error pools for the magnitudes in `decomp`, predicted with `sol` around the
/// sample mean of the magnitudes and clipped at zero. Pool `h` holds
/// `N - h - n + 1` errors.
pub fn build_error_pools<T: Scalar>(
    decomp: &MagnitudeDecomposition<T>,
    sol: &InnovationsSolution<T>,
    n: usize,
    horizon: usize,
) -> Result<ErrorPools<T>> {
    check_window(decomp.len(), n, horizon)?;
    if sol.n_max() < n + horizon - 1 {
        return Err(Error::OutOfRange {
            what: "window plus horizon",
            value: n + horizon - 1,
            max: sol.n_max(),
        });
    }
    let model = MagnitudeModel {
        mean: decomp.magnitude_mean(),
        solution: sol.clone(),
        window: n,
        horizon,
        clip_nonneg: true,
    };
    model.error_pools(&decomp.magnitudes)
}

/// How bootstrap signs are generated.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum SignSpec<T: Scalar> {
    /// iid +-1 with probability 1/2.
    #[default]
    Symmetric,
    /// Fit per-bin sign probabilities to the centered data; `None` picks the
    /// default bin width.
    Asymmetric { lambda: Option<T> },
    /// Use a sign model fitted elsewhere.
    Fitted(SignModel<T>),
}

impl<T: Scalar> SignSpec<T> {
    pub(crate) fn resolve(&self, centered: &[T]) -> Result<SignSampler<T>> {
        Ok(match self {
            SignSpec::Symmetric => SignSampler::Rademacher,
            SignSpec::Asymmetric { lambda } => {
                let lambda = lambda.unwrap_or_else(|| default_lambda(centered));
                SignSampler::Model(fit_sign_model(centered, lambda)?)
            }
            SignSpec::Fitted(model) => SignSampler::Model(model.clone()),
        })
    }
}

/// Settings shared by the forecasting pipelines.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastConfig<T: Scalar> {
    /// Predictor window length `n`.
    pub window: usize,
    /// Horizon `T`.
    pub horizon: usize,
    /// Bootstrap draws `B`.
    pub draws: usize,
    pub seed: u64,
    /// Floor magnitude predictions at zero.
    pub clip_nonneg: bool,
    pub signs: SignSpec<T>,
    /// Smallest acceptable error pool.
    pub min_pool: usize,
    pub resampling: ErrorResampling,
}

impl<T: Scalar> ForecastConfig<T> {
    pub fn new(window: usize, horizon: usize) -> Self {
        Self {
            window,
            horizon,
            draws: DEFAULT_DRAWS,
            seed: 0,
            clip_nonneg: true,
            signs: SignSpec::Symmetric,
            min_pool: DEFAULT_MIN_POOL,
            resampling: ErrorResampling::Joint,
        }
    }

    pub fn with_draws(mut self, draws: usize) -> Self {
        self.draws = draws;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_signs(mut self, signs: SignSpec<T>) -> Self {
        self.signs = signs;
        self
    }

    pub fn with_resampling(mut self, resampling: ErrorResampling) -> Self {
        self.resampling = resampling;
        self
    }

    /// Checks the settings against a magnitude series of length `len`.
    pub fn validate(&self, len: usize) -> Result<()> {
        if self.draws == 0 {
            return Err(Error::param("draws", "must be >= 1"));
        }
        check_window(len, self.window, self.horizon)?;
        let smallest = len + 1 - self.window - self.horizon;
        if smallest < self.min_pool {
            return Err(Error::InsufficientData {
                what: "error pools (window + horizon + min pool - 1)",
                needed: self.window + self.horizon + self.min_pool - 1,
                available: len,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SignSampler<T: Scalar> {
    Rademacher,
    Model(SignModel<T>),
}

impl<T: Scalar> SignSampler<T> {
    fn sample<R: Rng + ?Sized>(&self, magnitude: T, rng: &mut R) -> T {
        match self {
            SignSampler::Rademacher => {
                if rng.random::<bool>() {
                    T::one()
                } else {
                    -T::one()
                }
            }
            SignSampler::Model(model) => model.sample_sign(magnitude, rng),
        }
    }
}

/// Everything a bootstrap draw needs:
/// `center + sum_h weight_h * (point_h + W_h) * sign_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapPlan<T: Scalar> {
    center: T,
    weights: Vec<T>,
    point: Vec<T>,
    pools: ErrorPools<T>,
    signs: SignSampler<T>,
    resampling: ErrorResampling,
}

impl<T: Scalar> BootstrapPlan<T> {
    pub(crate) fn new(
        center: T,
        weights: Vec<T>,
        point: Vec<T>,
        pools: ErrorPools<T>,
        signs: SignSampler<T>,
        resampling: ErrorResampling,
    ) -> Self {
        debug_assert_eq!(weights.len(), point.len());
        debug_assert_eq!(pools.horizon(), point.len());
        Self {
            center,
            weights,
            point,
            pools,
            signs,
            resampling,
        }
    }

    /// Location the random part is added to.
    pub fn center(&self) -> T {
        self.center
    }

    /// Per-horizon weights on the future terms.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Point magnitude forecasts `mhat_h`.
    pub fn point_forecasts(&self) -> &[T] {
        &self.point
    }

    pub fn pools(&self) -> &ErrorPools<T> {
        &self.pools
    }

    /// Random part of draw `index`; with `flip` every sign is negated.
    pub(crate) fn draw_centered(&self, seed: u64, index: u64, flip: bool) -> T {
        let mut rng = substream(seed, Purpose::Bootstrap, index);
        let joint = match self.resampling {
            ErrorResampling::Joint => Some(self.pools.resample_joint(&mut rng)),
            ErrorResampling::Independent => None,
        };
        let mut acc = T::zero();
        for h in 1..=self.point.len() {
            let error = match &joint {
                Some(errors) => errors[h - 1],
                None => self.pools.resample(h, &mut rng),
            };
            let magnitude = self.point[h - 1] + error;
            let mut sign = self.signs.sample(magnitude, &mut rng);
            if flip {
                sign = -sign;
            }
            acc = acc + self.weights[h - 1] * magnitude * sign;
        }
        acc
    }

    /// `draws` independent samples, sorted. Draw `i` uses its own stream, so
    /// the result is independent of the rayon thread count.
    pub fn sample(&self, draws: usize, seed: u64) -> Result<EmpiricalDistribution<T>> {
        let samples: Vec<T> = (0..draws)
            .into_par_iter()
            .with_min_len(256)
            .map(|i| self.center + self.draw_centered(seed, i as u64, false))
            .collect();
        EmpiricalDistribution::from_samples(samples)
    }
}

/// Builds the bootstrap plan for `series` under `cfg` without sampling.
pub fn prepare_forecast<T: Scalar>(series: &ReturnSeries<T>, cfg: &ForecastConfig<T>) -> Result<BootstrapPlan<T>> {
    cfg.validate(series.len())?;
    let mu_hat = series.mean();
    let decomp = magnitude_sign_split(series, mu_hat);
    let model = MagnitudeModel::fit(&decomp.magnitudes, cfg.window, cfg.horizon, cfg.clip_nonneg)?;
    let pools = model.error_pools(&decomp.magnitudes)?;
    let point = model.predict(&decomp.magnitudes[decomp.len() - cfg.window..])?;
    let signs = cfg.signs.resolve(&decomp.deviations())?;
    Ok(BootstrapPlan::new(
        T::from_count(cfg.horizon) * mu_hat,
        vec![T::one(); cfg.horizon],
        point,
        pools,
        signs,
        cfg.resampling,
    ))
}

/// Forecast distribution of the next-`T` integrated return for a series with
/// serially uncorrelated returns.
pub fn forecast_distribution<T: Scalar>(
    series: &ReturnSeries<T>,
    cfg: &ForecastConfig<T>,
) -> Result<EmpiricalDistribution<T>> {
    prepare_forecast(series, cfg)?.sample(cfg.draws, cfg.seed)
}
