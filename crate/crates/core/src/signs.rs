//! Sign laws for asymmetric shocks.
//!
//! Centered returns are split into magnitude bins `[j*lambda, (j+1)*lambda)`;
//! within each bin the probability of a positive sign is estimated from the
//! data. For symmetric shocks every bin sits at 1/2 and sampling reduces to a
//! Rademacher draw.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{substream, Purpose};
use crate::scalar::Scalar;

/// Probability used for magnitude bins never seen during fitting.
pub const EMPTY_BIN_PROBABILITY: f64 = 0.5;

/// Relative bin width used when none is given: `lambda = 0.1 * sd`.
pub const DEFAULT_LAMBDA_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BinCounts {
    pub total: u64,
    pub positive: u64,
}

impl BinCounts {
    /// Add-half smoothed `P(sign = +1)`.
    pub fn p_plus(&self) -> f64 {
        (self.positive as f64 + 0.5) / (self.total as f64 + 1.0)
    }
}

/// Per-bin conditional sign probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct SignModel<T: Scalar> {
    lambda: T,
    bins: BTreeMap<usize, BinCounts>,
    fallback: f64,
}

impl<T: Scalar> SignModel<T> {
    /// Model with no fitted bins: every magnitude maps to `fallback`.
    pub fn uniform(lambda: T, fallback: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if !(0.0..=1.0).contains(&fallback) {
            return Err(Error::param("fallback", format!("must lie in [0, 1], got {fallback}")));
        }
        Ok(Self {
            lambda,
            bins: BTreeMap::new(),
            fallback,
        })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn fallback(&self) -> f64 {
        self.fallback
    }

    /// Bin index `floor(m / lambda)`; negative magnitudes fall in bin 0.
    pub fn bin_of(&self, magnitude: T) -> usize {
        let j = (magnitude.max(T::zero()) / self.lambda).floor();
        j.to_usize().unwrap_or(usize::MAX)
    }

    /// Lower bin edge `j * lambda` that stands in for `magnitude`.
    pub fn discretize(&self, magnitude: T) -> T {
        T::from_count(self.bin_of(magnitude)) * self.lambda
    }

    pub fn bins(&self) -> &BTreeMap<usize, BinCounts> {
        &self.bins
    }

    /// `P(sign = +1 | magnitude)`.
    pub fn p_plus(&self, magnitude: T) -> f64 {
        self.p_plus_bin(self.bin_of(magnitude))
    }

    pub fn p_plus_bin(&self, bin: usize) -> f64 {
        self.bins.get(&bin).map_or(self.fallback, BinCounts::p_plus)
    }

    /// One sign (+1 or -1) for `magnitude`.
    pub fn sample_sign<R: Rng + ?Sized>(&self, magnitude: T, rng: &mut R) -> T {
        let u: f64 = rng.random();
        if u < self.p_plus(magnitude) {
            T::one()
        } else {
            -T::one()
        }
    }
}

fn check_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if lambda > T::zero() && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::param("lambda", format!("bin width must be > 0, got {lambda}")))
    }
}

/// `DEFAULT_LAMBDA_FRACTION` times the sample standard deviation of
/// `centered` (taken about zero).
pub fn default_lambda<T: Scalar>(centered: &[T]) -> T {
    let n = T::from_count(centered.len().max(1));
    let sd = (centered.iter().map(|&x| x * x).sum::<T>() / n).sqrt();
    sd * T::of(DEFAULT_LAMBDA_FRACTION)
}

/// Bins `|r|` of the centered returns with width `lambda` and counts
/// strictly positive values per bin.
pub fn fit_sign_model<T: Scalar>(centered: &[T], lambda: T) -> Result<SignModel<T>> {
    check_lambda(lambda)?;
    if centered.is_empty() {
        return Err(Error::InsufficientData {
            what: "sign model",
            needed: 1,
            available: 0,
        });
    }
    if let Some(index) = centered.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let mut model = SignModel::uniform(lambda, EMPTY_BIN_PROBABILITY)?;
    for &r in centered {
        let entry = model.bins.entry(model.bin_of(r.abs())).or_default();
        entry.total += 1;
        if r > T::zero() {
            entry.positive += 1;
        }
    }
    Ok(model)
}

/// Independent signs for each magnitude, driven by `seed`.
pub fn sample_signs<T: Scalar>(model: &SignModel<T>, magnitudes: &[T], seed: u64) -> Vec<T> {
    let mut rng = substream(seed, Purpose::Signs, 0);
    magnitudes
        .iter()
        .map(|&m| model.sample_sign(m, &mut rng))
        .collect()
}

/// Discretized magnitude times a model-drawn sign for every centered return.
pub fn reconstruct<T: Scalar>(model: &SignModel<T>, centered: &[T], seed: u64) -> Vec<T> {
    let magnitudes: Vec<T> = centered.iter().map(|x| x.abs()).collect();
    sample_signs(model, &magnitudes, seed)
        .into_iter()
        .zip(&magnitudes)
        .map(|(s, &m)| s * model.discretize(m))
        .collect()
}
