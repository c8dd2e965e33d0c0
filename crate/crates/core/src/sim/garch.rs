use std::collections::VecDeque;

use rand::Rng;

use super::{Shock, DEFAULT_GARCH_BURNIN};
use crate::error::{Error, Result};
use crate::rng::{substream, Purpose, StreamRng};
use crate::scalar::Scalar;
use crate::series::ReturnSeries;

/// Squared-volatility recursion
/// `h_t^2 = intercept + sum_i variance_lags[i] h_{t-1-i}^2 + sum_j shock_lags[j] (r_{t-1-j} - mu)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GarchParams<T: Scalar> {
    pub mu: T,
    /// Constant term, > 0.
    pub intercept: T,
    /// Weights on lagged squared volatility (p of them), each >= 0.
    pub variance_lags: Vec<T>,
    /// Weights on lagged squared deviations (q of them), each >= 0.
    pub shock_lags: Vec<T>,
}

impl<T: Scalar> GarchParams<T> {
    /// GARCH(1,1) with one weight on each lag family.
    pub fn garch11(mu: T, intercept: T, variance_lag: T, shock_lag: T) -> Self {
        Self {
            mu,
            intercept,
            variance_lags: vec![variance_lag],
            shock_lags: vec![shock_lag],
        }
    }

    pub fn persistence(&self) -> T {
        self.variance_lags.iter().copied().sum::<T>() + self.shock_lags.iter().copied().sum::<T>()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() {
            return Err(Error::param("mu", "must be finite"));
        }
        if !(self.intercept > T::zero() && self.intercept.is_finite()) {
            return Err(Error::param(
                "intercept",
                format!("must be > 0, got {}", self.intercept),
            ));
        }
        let weights = self.variance_lags.iter().chain(self.shock_lags.iter());
        if let Some(w) = weights.into_iter().find(|w| !(**w >= T::zero() && w.is_finite())) {
            return Err(Error::param("weights", format!("must be >= 0, got {w}")));
        }
        let persistence = self.persistence();
        if persistence >= T::one() {
            return Err(Error::NonStationary {
                persistence: persistence.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// `E h_t^2 = intercept / (1 - persistence)`.
    pub fn unconditional_variance(&self) -> T {
        self.intercept / (T::one() - self.persistence())
    }
}

/// Running GARCH generator holding the last `p` squared volatilities and the
/// last `q` squared deviations.
#[derive(Debug, Clone)]
pub struct GarchSimulator<T: Scalar> {
    params: GarchParams<T>,
    shock: Shock,
    /// newest first
    past_variance: VecDeque<T>,
    /// newest first
    past_sq_dev: VecDeque<T>,
}

impl<T: Scalar> GarchSimulator<T> {
    /// Every lag starts at the unconditional variance.
    pub fn new(params: GarchParams<T>, shock: Shock) -> Result<Self> {
        params.validate()?;
        shock.validate()?;
        let v = params.unconditional_variance();
        Ok(Self {
            past_variance: std::iter::repeat_n(v, params.variance_lags.len()).collect(),
            past_sq_dev: std::iter::repeat_n(v, params.shock_lags.len()).collect(),
            params,
            shock,
        })
    }

    pub fn params(&self) -> &GarchParams<T> {
        &self.params
    }

    /// `h_t^2` for the next return.
    pub fn next_variance(&self) -> T {
        let ar: T = self
            .params
            .variance_lags
            .iter()
            .zip(&self.past_variance)
            .map(|(&a, &h2)| a * h2)
            .sum();
        let ma: T = self
            .params
            .shock_lags
            .iter()
            .zip(&self.past_sq_dev)
            .map(|(&b, &e2)| b * e2)
            .sum();
        self.params.intercept + ar + ma
    }

    /// Emits `(r_t, h_t^2)` and advances the state.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (T, T) {
        let h2 = self.next_variance();
        let dev = h2.sqrt() * T::of(self.shock.sample(rng));
        if !self.past_variance.is_empty() {
            self.past_variance.pop_back();
            self.past_variance.push_front(h2);
        }
        if !self.past_sq_dev.is_empty() {
            self.past_sq_dev.pop_back();
            self.past_sq_dev.push_front(dev * dev);
        }
        (self.params.mu + dev, h2)
    }
}

/// Simulated GARCH path with squared volatilities and the final state.
#[derive(Debug, Clone)]
pub struct GarchPath<T: Scalar> {
    pub returns: ReturnSeries<T>,
    pub variance: Vec<T>,
    pub state: GarchSimulator<T>,
}

impl<T: Scalar> GarchPath<T> {
    pub fn generate(
        params: GarchParams<T>,
        shock: Shock,
        length: usize,
        seed: u64,
        burnin: usize,
    ) -> Result<Self> {
        if length == 0 {
            return Err(Error::param("length", "must be >= 1"));
        }
        let mut rng: StreamRng = substream(seed, Purpose::Simulation, 0);
        let mut state = GarchSimulator::new(params, shock)?;
        for _ in 0..burnin {
            state.step(&mut rng);
        }
        let (returns, variance): (Vec<T>, Vec<T>) =
            (0..length).map(|_| state.step(&mut rng)).unzip();
        Ok(Self {
            returns: ReturnSeries::new(returns)?,
            variance,
            state,
        })
    }
}

/// `length` GARCH returns with standard normal shocks after `burnin`
/// discarded steps.
pub fn simulate_garch<T: Scalar>(
    params: &GarchParams<T>,
    length: usize,
    seed: u64,
    burnin: usize,
) -> Result<ReturnSeries<T>> {
    Ok(GarchPath::generate(params.clone(), Shock::Normal, length, seed, burnin)?.returns)
}

/// Same as [`simulate_garch`] with the default burn-in.
pub fn simulate_garch_default<T: Scalar>(params: &GarchParams<T>, length: usize, seed: u64) -> Result<ReturnSeries<T>> {
    simulate_garch(params, length, seed, DEFAULT_GARCH_BURNIN)
}

/// ARCH(infinity) form of the recursion:
/// `h_t^2 = c + sum_{i>=1} g_i (r_{t-i} - mu)^2`.
///
/// Returns `(c, [g_1, .., g_count])` with `c = intercept / (1 - sum variance_lags)`
/// and `g` the power-series quotient of the shock-lag polynomial by
/// `1 - variance-lag polynomial`.
pub fn garch_ma_coefficients<T: Scalar>(params: &GarchParams<T>, count: usize) -> Result<(T, Vec<T>)> {
    params.validate()?;
    if count == 0 {
        return Err(Error::param("count", "must be >= 1"));
    }
    let ar = &params.variance_lags;
    let ma = &params.shock_lags;
    let ar_sum: T = ar.iter().copied().sum();
    let intercept = params.intercept / (T::one() - ar_sum);
    let mut g: Vec<T> = Vec::with_capacity(count);
    for i in 1..=count {
        let mut gi = ma.get(i - 1).copied().unwrap_or_else(T::zero);
        for (k, &a) in ar.iter().enumerate().take(i - 1) {
            // g_{i-k-1} in 1-based terms
            gi = gi + a * g[i - k - 2];
        }
        g.push(gi);
    }
    Ok((intercept, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonstationary_and_bad_weights() {
        let p = GarchParams::garch11(0.0, 1e-6, 0.9, 0.1);
        assert!(matches!(p.validate(), Err(Error::NonStationary { .. })));
        assert!(matches!(simulate_garch(&p, 10, 1, 0), Err(Error::NonStationary { .. })));
        assert!(matches!(garch_ma_coefficients(&p, 5), Err(Error::NonStationary { .. })));
        let p = GarchParams::garch11(0.0, 0.0, 0.5, 0.1);
        assert!(matches!(p.validate(), Err(Error::InvalidParameter { .. })));
        let p = GarchParams::garch11(0.0, 1e-6, -0.1, 0.1);
        assert!(matches!(p.validate(), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn no_lags_gives_iid_gaussian() {
        let p = GarchParams { mu: 0.0, intercept: 4e-4, variance_lags: vec![], shock_lags: vec![] };
        let path = GarchPath::generate(p, Shock::Normal, 40_000, 8, 10).unwrap();
        assert!(path.variance.iter().all(|&v| v == 4e-4));
        let n = 40_000.0;
        let v = path.returns.values().iter().map(|x| x * x).sum::<f64>() / n;
        assert!((v - 4e-4).abs() < 4.0 * 4e-4 * (2.0 / n).sqrt());
    }

    #[test]
    fn variance_floor_and_determinism() {
        let p = GarchParams::garch11(0.0005, 1e-6, 0.85, 0.1);
        let a = GarchPath::generate(p.clone(), Shock::Normal, 5000, 3, 100).unwrap();
        assert!(a.variance.iter().all(|&v| v >= 1e-6));
        let b = simulate_garch(&p, 5000, 3, 100).unwrap();
        assert_eq!(a.returns, b);
        assert_ne!(b, simulate_garch(&p, 5000, 4, 100).unwrap());
    }

    #[test]
    fn long_run_variance_matches_stationary_moment() {
        let p = GarchParams::garch11(0.0, 1e-6, 0.9, 0.05);
        let r = simulate_garch(&p, 1_000_000, 17, 10_000).unwrap();
        let n = r.len() as f64;
        let v = r.values().iter().map(|x| x * x).sum::<f64>() / n;
        let target = 1e-6 / (1.0 - 0.9 - 0.05);
        assert!(((v - target) / target).abs() < 0.05, "variance {v} vs {target}");
    }

    #[test]
    fn pure_arch_expansion_has_no_recursion() {
        let p = GarchParams { mu: 0.0, intercept: 2e-5, variance_lags: vec![], shock_lags: vec![0.3] };
        let (c, g) = garch_ma_coefficients(&p, 6).unwrap();
        assert_eq!(c, 2e-5);
        assert_eq!(g, vec![0.3, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn garch11_expansion_is_geometric() {
        let p = GarchParams::<f64>::garch11(0.0, 1e-6, 0.8, 0.15);
        let (c, g) = garch_ma_coefficients(&p, 40).unwrap();
        assert!((c - 1e-6 / 0.2).abs() < 1e-18);
        // unroll the recursion numerically: impulse response of h^2 to a
        // unit squared deviation at lag 1
        let mut h2 = vec![0.0f64; 41];
        for t in 1..=40 {
            let impulse = if t == 1 { 1.0 } else { 0.0 };
            h2[t] = 0.8 * h2[t - 1] + 0.15 * impulse;
        }
        for i in 1..=40 {
            let closed = 0.15 * 0.8f64.powi(i as i32 - 1);
            assert!((g[i - 1] - closed).abs() < 1e-15);
            assert!((g[i - 1] - h2[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn expansion_reconstructs_simulated_variance() {
        let p = GarchParams::<f64>::garch11(0.0002, 1e-6, 0.9, 0.05);
        let path = GarchPath::generate(p.clone(), Shock::Normal, 2000, 21, 500).unwrap();
        let (c, g) = garch_ma_coefficients(&p, 200).unwrap();
        let dev2: Vec<f64> = path.returns.values().iter().map(|r| (r - 0.0002).powi(2)).collect();
        for t in 200..2000 {
            let rebuilt = c + (1..=200).map(|i| g[i - 1] * dev2[t - i]).sum::<f64>();
            let rel = (rebuilt - path.variance[t]).abs() / path.variance[t];
            assert!(rel < 1e-6, "t={t} rel={rel}");
        }
    }

    #[test]
    fn higher_order_partial_sums_are_bounded() {
        let p = GarchParams {
            mu: 0.0,
            intercept: 1e-6,
            variance_lags: vec![0.5, 0.2],
            shock_lags: vec![0.1, 0.05, 0.03],
        };
        let (_, g): (f64, Vec<f64>) = garch_ma_coefficients(&p, 300).unwrap();
        let bound = 0.18 / (1.0 - 0.7);
        let mut partial = 0.0f64;
        for gi in g {
            assert!(gi >= 0.0);
            let next = partial + gi;
            assert!(next >= partial && next <= bound + 1e-12);
            partial = next;
        }
        assert!((partial - bound).abs() < 1e-9);
    }
}
