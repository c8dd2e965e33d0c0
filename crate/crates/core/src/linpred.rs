//! Best linear prediction of a stationary series from a finite window via the
//! innovations algorithm.
//!
//! The recursion only needs the autocovariance function. Predictions are
//! expressed as weighted sums of one-step innovations `x_k - xhat_k` computed
//! by running the same recursion forward through the window.

use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};

/// Relative tolerance below which an innovation variance counts as zero.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Largest window the default sizing rule picks.
pub const MAX_DEFAULT_WINDOW: usize = 50;

/// Default window length for a series of `len` observations:
/// `min(len / 4, 50)`, at least 1.
pub fn default_window(len: usize) -> usize {
    (len / 4).clamp(1, MAX_DEFAULT_WINDOW)
}

/// Autocovariances `gamma(0..=max_lag)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocovarianceTable<T: Scalar> {
    gamma: Vec<T>,
}

impl<T: Scalar> AutocovarianceTable<T> {
    /// Wraps a theoretical table; requires `gamma(0) >= 0` and
    /// `|gamma(h)| <= gamma(0)`.
    pub fn from_values(gamma: Vec<T>) -> Result<Self> {
        let g0 = *gamma
            .first()
            .ok_or_else(|| Error::param("gamma", "table must contain lag 0"))?;
        if !(g0 >= T::zero()) || gamma.iter().any(|g| !g.is_finite()) {
            return Err(Error::param("gamma", "gamma(0) must be finite and >= 0"));
        }
        let slack = g0 * T::of(1e-12);
        if let Some(h) = gamma.iter().position(|g| g.abs() > g0 + slack) {
            return Err(Error::param(
                "gamma",
                format!("|gamma({h})| exceeds gamma(0)"),
            ));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self, lag: usize) -> T {
        self.gamma[lag]
    }

    pub fn values(&self) -> &[T] {
        &self.gamma
    }

    pub fn max_lag(&self) -> usize {
        self.gamma.len() - 1
    }
}

/// Biased (divisor `N`) sample autocovariances, which keep the implied
/// Toeplitz matrix positive semidefinite.
pub fn sample_autocovariance<T: Scalar>(series: &[T], max_lag: usize) -> Result<AutocovarianceTable<T>> {
    let n = series.len();
    if max_lag >= n {
        return Err(Error::OutOfRange {
            what: "autocovariance lag",
            value: max_lag,
            max: n.saturating_sub(1),
        });
    }
    let m = mean(series);
    let centered: Vec<T> = series.iter().map(|&x| x - m).collect();
    let denom = T::from_count(n);
    let gamma = (0..=max_lag)
        .map(|h| {
            centered[..n - h]
                .iter()
                .zip(&centered[h..])
                .map(|(&a, &b)| a * b)
                .sum::<T>()
                / denom
        })
        .collect();
    Ok(AutocovarianceTable { gamma })
}

/// Coefficients `theta[k][j]` (1 <= j <= k <= n_max) and one-step mean
/// squared errors `v[0..=n_max]` of the innovations recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct InnovationsSolution<T: Scalar> {
    /// Row `k` holds `theta_{k,1..=k}`.
    theta: Vec<Vec<T>>,
    v: Vec<T>,
}

impl<T: Scalar> InnovationsSolution<T> {
    /// Solution for an uncorrelated series: every coefficient is zero and
    /// every one-step error has the series variance.
    ///
    /// Unlike [`innovations_coefficients`] this accepts `variance == 0`, which
    /// is how a constant series is predicted (by its mean).
    pub fn white_noise(variance: T, n_max: usize) -> Self {
        Self {
            theta: (0..=n_max).map(|k| vec![T::zero(); k]).collect(),
            v: vec![variance; n_max + 1],
        }
    }

    pub fn n_max(&self) -> usize {
        self.v.len() - 1
    }

    /// `theta_{k,j}`, with `theta_{k,0} = 1` and zero beyond the row.
    pub fn theta(&self, k: usize, j: usize) -> T {
        match j {
            0 => T::one(),
            j if j <= k => self.theta[k][j - 1],
            _ => T::zero(),
        }
    }

    pub fn row(&self, k: usize) -> &[T] {
        &self.theta[k]
    }

    /// One-step mean squared error `v_k`.
    pub fn mse(&self, k: usize) -> T {
        self.v[k]
    }

    pub fn mse_sequence(&self) -> &[T] {
        &self.v
    }
}

/// Runs the innovations recursion on `acov` up to order `n_max`.
///
/// Fails with [`Error::Degenerate`] once some `v_k` drops to
/// `DEGENERACY_TOLERANCE * gamma(0)` or below.
pub fn innovations_coefficients<T: Scalar>(
    acov: &AutocovarianceTable<T>,
    n_max: usize,
) -> Result<InnovationsSolution<T>> {
    if n_max > acov.max_lag() {
        return Err(Error::OutOfRange {
            what: "innovations order",
            value: n_max,
            max: acov.max_lag(),
        });
    }
    let g0 = acov.gamma(0);
    let floor = g0 * T::of(DEGENERACY_TOLERANCE);
    if !(g0 > T::zero()) {
        return Err(Error::Degenerate {
            step: 0,
            mse: g0.to_f64_lossy(),
        });
    }
    let mut theta: Vec<Vec<T>> = Vec::with_capacity(n_max + 1);
    let mut v: Vec<T> = Vec::with_capacity(n_max + 1);
    theta.push(Vec::new());
    v.push(g0);
    for n in 1..=n_max {
        // row[j - 1] = theta_{n,j}; filled from j = n down to j = 1
        let mut row = vec![T::zero(); n];
        for k in 0..n {
            let mut acc = acov.gamma(n - k);
            for j in 0..k {
                acc = acc - theta[k][k - j - 1] * row[n - j - 1] * v[j];
            }
            row[n - k - 1] = acc / v[k];
        }
        let vn = g0
            - (0..n)
                .map(|j| {
                    let t = row[n - j - 1];
                    t * t * v[j]
                })
                .sum::<T>();
        if !(vn > floor) {
            return Err(Error::Degenerate {
                step: n,
                mse: vn.to_f64_lossy(),
            });
        }
        theta.push(row);
        v.push(vn);
    }
    Ok(InnovationsSolution { theta, v })
}

/// Mean-removed window `x_1..x_L` together with the one-step predictions
/// `xhat_1..xhat_L` that the recursion assigns inside it (`xhat_1 = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorWindow<T: Scalar> {
    values: Vec<T>,
    fitted: Vec<T>,
}

impl<T: Scalar> PredictorWindow<T> {
    /// Builds the window from centered values, `1 <= len <= sol.n_max()`.
    pub fn new(sol: &InnovationsSolution<T>, centered: &[T]) -> Result<Self> {
        let len = centered.len();
        if len == 0 {
            return Err(Error::InsufficientData {
                what: "predictor window",
                needed: 1,
                available: 0,
            });
        }
        if len > sol.n_max() {
            return Err(Error::OutOfRange {
                what: "window length",
                value: len,
                max: sol.n_max(),
            });
        }
        let mut fitted = Vec::with_capacity(len);
        let mut innov: Vec<T> = Vec::with_capacity(len);
        for (k, &x) in centered.iter().enumerate() {
            // xhat_{k+1} = sum_{j=1}^{k} theta_{k,j} (x_{k+1-j} - xhat_{k+1-j})
            let xhat = next_prediction(sol.row(k), &innov);
            fitted.push(xhat);
            innov.push(x - xhat);
        }
        Ok(Self {
            values: centered.to_vec(),
            fitted,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// In-window one-step predictions `xhat_1..xhat_L`.
    pub fn fitted(&self) -> &[T] {
        &self.fitted
    }

    /// In-window innovations `x_k - xhat_k`.
    pub fn innovations(&self) -> Vec<T> {
        self.values
            .iter()
            .zip(&self.fitted)
            .map(|(&x, &f)| x - f)
            .collect()
    }
}

/// `sum_j row[j-1] * innov[len - j]`: the prediction that follows `innov`.
fn next_prediction<T: Scalar>(row: &[T], innov: &[T]) -> T {
    let len = innov.len();
    row.iter()
        .zip(innov.iter().rev())
        .take(len)
        .map(|(&t, &e)| t * e)
        .sum()
}

/// Centered one-step prediction of the value that follows the window.
pub fn one_step_predict<T: Scalar>(sol: &InnovationsSolution<T>, window: &PredictorWindow<T>) -> T {
    let innov = window.innovations();
    next_prediction(sol.row(window.len()), &innov)
}

/// `h`-step prediction of the value `h` steps past the end of the window.
///
/// With `L` the window length, the centered prediction is
/// `sum_{j=h}^{L+h-1} theta_{L+h-1,j} (x_{L+h-j} - xhat_{L+h-j})`. The
/// result is shifted by `mean` and, with `clip_nonneg`, floored at zero.
pub fn h_step_predict<T: Scalar>(
    sol: &InnovationsSolution<T>,
    window: &PredictorWindow<T>,
    h: usize,
    mean: T,
    clip_nonneg: bool,
) -> Result<T> {
    let innov = window.innovations();
    let centered = h_step_centered(sol, &innov, h)?;
    let pred = centered + mean;
    Ok(if clip_nonneg { pred.max(T::zero()) } else { pred })
}

/// Centered `h`-step prediction from precomputed window innovations.
pub(crate) fn h_step_centered<T: Scalar>(sol: &InnovationsSolution<T>, innov: &[T], h: usize) -> Result<T> {
    let len = innov.len();
    let max_h = sol.n_max() + 1 - len.min(sol.n_max() + 1);
    if h == 0 || len + h - 1 > sol.n_max() {
        return Err(Error::OutOfRange {
            what: "prediction horizon",
            value: h,
            max: max_h,
        });
    }
    let row = sol.row(len + h - 1);
    Ok((h..len + h)
        .map(|j| row[j - 1] * innov[len + h - j - 1])
        .sum())
}
