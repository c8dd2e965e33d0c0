use std::collections::VecDeque;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Shock, DEFAULT_SV_TRUNCATION};
use crate::error::{Error, Result};
use crate::rng::{substream, Purpose, StreamRng};
use crate::scalar::Scalar;
use crate::series::ReturnSeries;

/// Log-normal stochastic volatility:
/// `h_t = delta0 * exp(sum_{i=0}^{trunc} phi^i eta_{t-1-i} / 2)` with
/// `eta ~ iid N(0, sigma_eta^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvParams<T: Scalar> {
    pub mu: T,
    /// Volatility scale, > 0.
    pub delta0: T,
    /// Persistence of the log-volatility, in (0, 1).
    pub phi: T,
    /// Standard deviation of the latent sequence, >= 0.
    pub sigma_eta: T,
    /// Highest lag kept in the log-volatility sum, >= 1.
    pub trunc: usize,
}

impl<T: Scalar> SvParams<T> {
    pub fn new(mu: T, delta0: T, phi: T, sigma_eta: T) -> Self {
        Self {
            mu,
            delta0,
            phi,
            sigma_eta,
            trunc: DEFAULT_SV_TRUNCATION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() {
            return Err(Error::param("mu", "must be finite"));
        }
        if !(self.delta0 > T::zero() && self.delta0.is_finite()) {
            return Err(Error::param("delta0", format!("must be > 0, got {}", self.delta0)));
        }
        if !(self.phi > T::zero() && self.phi < T::one()) {
            return Err(Error::param("phi", format!("must lie in (0, 1), got {}", self.phi)));
        }
        if !(self.sigma_eta >= T::zero() && self.sigma_eta.is_finite()) {
            return Err(Error::param(
                "sigma_eta",
                format!("must be >= 0, got {}", self.sigma_eta),
            ));
        }
        if self.trunc == 0 {
            return Err(Error::param("trunc", "must be >= 1"));
        }
        Ok(())
    }

    /// Closed-form `E h_t^2` for the truncated sum.
    pub fn stationary_variance(&self) -> T {
        let phi2 = self.phi * self.phi;
        let geometric = (T::one() - phi2.powi(self.trunc as i32 + 1)) / (T::one() - phi2);
        self.delta0 * self.delta0
            * (self.sigma_eta * self.sigma_eta * geometric / T::of(2.0)).exp()
    }
}

/// Running SV generator; the state is the window of past latent draws.
#[derive(Debug, Clone)]
pub struct SvSimulator<T: Scalar> {
    params: SvParams<T>,
    shock: Shock,
    /// `phi^i`, i = 0..=trunc
    weights: Vec<T>,
    /// Most recent latent draw first.
    eta: VecDeque<T>,
}

impl<T: Scalar> SvSimulator<T> {
    /// Starts from a stationary state: the pre-sample latent draws are iid.
    pub fn new<R: Rng + ?Sized>(params: SvParams<T>, shock: Shock, rng: &mut R) -> Result<Self> {
        params.validate()?;
        shock.validate()?;
        let weights: Vec<T> = (0..=params.trunc)
            .scan(T::one(), |w, _| {
                let cur = *w;
                *w = *w * params.phi;
                Some(cur)
            })
            .collect();
        let mut sim = Self {
            params,
            shock,
            weights,
            eta: VecDeque::with_capacity(params.trunc + 2),
        };
        for _ in 0..=params.trunc {
            let e = sim.draw_eta(rng);
            sim.eta.push_front(e);
        }
        Ok(sim)
    }

    fn draw_eta<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let z: f64 = StandardNormal.sample(rng);
        self.params.sigma_eta * T::of(z)
    }

    pub fn params(&self) -> &SvParams<T> {
        &self.params
    }

    /// Volatility `h_t` of the next return given the stored latent history.
    pub fn next_volatility(&self) -> T {
        let s: T = self
            .weights
            .iter()
            .zip(self.eta.iter())
            .map(|(&w, &e)| w * e)
            .sum();
        self.params.delta0 * (s / T::of(2.0)).exp()
    }

    /// Emits `(r_t, h_t)` and advances the latent history.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> (T, T) {
        let h = self.next_volatility();
        let u = T::of(self.shock.sample(rng));
        let r = self.params.mu + h * u;
        let e = self.draw_eta(rng);
        self.eta.push_front(e);
        self.eta.truncate(self.params.trunc + 1);
        (r, h)
    }
}

/// Simulated SV path with its volatilities and the generator state after the
/// last observation.
#[derive(Debug, Clone)]
pub struct SvPath<T: Scalar> {
    pub returns: ReturnSeries<T>,
    pub volatility: Vec<T>,
    pub state: SvSimulator<T>,
}

impl<T: Scalar> SvPath<T> {
    pub fn generate(params: SvParams<T>, shock: Shock, length: usize, seed: u64) -> Result<Self> {
        if length == 0 {
            return Err(Error::param("length", "must be >= 1"));
        }
        let mut rng: StreamRng = substream(seed, Purpose::Simulation, 0);
        let mut state = SvSimulator::new(params, shock, &mut rng)?;
        let (returns, volatility): (Vec<T>, Vec<T>) =
            (0..length).map(|_| state.step(&mut rng)).unzip();
        Ok(Self {
            returns: ReturnSeries::new(returns)?,
            volatility,
            state,
        })
    }
}

/// `length` returns from the SV model with standard normal shocks.
pub fn simulate_sv<T: Scalar>(params: SvParams<T>, length: usize, seed: u64) -> Result<ReturnSeries<T>> {
    Ok(SvPath::generate(params, Shock::Normal, length, seed)?.returns)
}
