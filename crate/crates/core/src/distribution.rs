use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sorted bootstrap sample of a forecast distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution<T: Scalar> {
    samples: Vec<T>,
}

impl<T: Scalar> EmpiricalDistribution<T> {
    /// Sorts `samples` ascending. Requires at least one finite sample.
    pub fn from_samples(mut samples: Vec<T>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InsufficientData {
                what: "empirical distribution",
                needed: 1,
                available: 0,
            });
        }
        if let Some(index) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        samples.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn min(&self) -> T {
        self.samples[0]
    }

    pub fn max(&self) -> T {
        self.samples[self.samples.len() - 1]
    }

    pub fn mean(&self) -> T {
        crate::scalar::mean(&self.samples)
    }

    pub fn variance(&self) -> T {
        let m = self.mean();
        self.samples.iter().map(|&x| (x - m) * (x - m)).sum::<T>() / T::from_count(self.len())
    }

    /// Sample skewness about `center` (third central moment over `sd^3`).
    pub fn skewness_about(&self, center: T) -> T {
        let n = T::from_count(self.len());
        let m2 = self.samples.iter().map(|&x| (x - center).powi(2)).sum::<T>() / n;
        let m3 = self.samples.iter().map(|&x| (x - center).powi(3)).sum::<T>() / n;
        if m2 == T::zero() {
            return T::zero();
        }
        m3 / m2.powf(T::of(1.5))
    }

    /// Right-continuous empirical CDF.
    pub fn cdf(&self, x: T) -> T {
        let count = self.samples.partition_point(|&s| s <= x);
        T::from_count(count) / T::from_count(self.len())
    }

    /// Two-sample Kolmogorov-Smirnov distance `sup |F - G|`.
    pub fn ks_distance(&self, other: &Self) -> f64 {
        ks_two_sample(&self.samples, &other.samples)
    }

    /// Kolmogorov-Smirnov distance to a continuous reference CDF.
    pub fn ks_distance_to<F: Fn(f64) -> f64>(&self, reference: F) -> f64 {
        let n = self.len() as f64;
        self.samples
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = reference(x.to_f64_lossy());
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Kolmogorov-Smirnov distance between two ascending samples.
pub(crate) fn ks_two_sample<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
