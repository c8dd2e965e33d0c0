use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};

/// Ordered, finite return observations `r_1..r_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries<T: Scalar> {
    values: Vec<T>,
    timestamps: Option<Vec<String>>,
    mean: T,
}

impl<T: Scalar> ReturnSeries<T> {
    /// Wraps `values`, rejecting an empty series or any non-finite entry.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData {
                what: "return series",
                needed: 1,
                available: 0,
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let mean = mean(&values);
        Ok(Self {
            values,
            timestamps: None,
            mean,
        })
    }

    /// Attaches one timestamp label per observation.
    pub fn with_timestamps(mut self, timestamps: Vec<String>) -> Result<Self> {
        if timestamps.len() != self.values.len() {
            return Err(Error::param(
                "timestamps",
                format!(
                    "{} labels for {} observations",
                    timestamps.len(),
                    self.values.len()
                ),
            ));
        }
        self.timestamps = Some(timestamps);
        Ok(self)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn timestamps(&self) -> Option<&[String]> {
        self.timestamps.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample mean, cached at construction.
    pub fn mean(&self) -> T {
        self.mean
    }

    /// The first `len` observations as a new series.
    pub fn prefix(&self, len: usize) -> Result<Self> {
        let len = len.min(self.values.len());
        let mut out = Self::new(self.values[..len].to_vec())?;
        if let Some(ts) = &self.timestamps {
            out.timestamps = Some(ts[..len].to_vec());
        }
        Ok(out)
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}
