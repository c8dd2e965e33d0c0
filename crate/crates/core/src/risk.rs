//! Lower-tail risk functionals of a forecast distribution.
//!
//! Both measures use the `ceil(p B)` smallest samples: VaR is the largest of
//! them, CTE their mean. The VaR sample itself belongs to the tail.

use crate::distribution::EmpiricalDistribution;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskReport<T: Scalar> {
    pub level: f64,
    pub var: T,
    pub cte: T,
    pub n_tail: usize,
}

/// `ceil(p * draws)` clamped to `1..=draws`. Products within 1e-9 of an
/// integer are treated as that integer so `0.05 * 100` gives 5.
pub fn tail_count(draws: usize, p: f64) -> Result<usize> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param("level", format!("must lie in (0, 1), got {p}")));
    }
    if draws == 0 {
        return Err(Error::InsufficientData {
            what: "risk measure",
            needed: 1,
            available: 0,
        });
    }
    let x = p * draws as f64;
    let rounded = x.round();
    let k = if (x - rounded).abs() <= 1e-9 * x.max(1.0) {
        rounded
    } else {
        x.ceil()
    };
    Ok((k as usize).clamp(1, draws))
}

/// The `ceil(p B)`-th smallest sample.
pub fn value_at_risk<T: Scalar>(dist: &EmpiricalDistribution<T>, p: f64) -> Result<T> {
    let k = tail_count(dist.len(), p)?;
    Ok(dist.samples()[k - 1])
}

/// Mean of the `ceil(p B)` smallest samples.
pub fn conditional_tail_expectation<T: Scalar>(dist: &EmpiricalDistribution<T>, p: f64) -> Result<T> {
    let k = tail_count(dist.len(), p)?;
    Ok(dist.samples()[..k].iter().copied().sum::<T>() / T::from_count(k))
}

pub fn risk_report<T: Scalar>(dist: &EmpiricalDistribution<T>, p: f64) -> Result<RiskReport<T>> {
    Ok(RiskReport {
        level: p,
        var: value_at_risk(dist, p)?,
        cte: conditional_tail_expectation(dist, p)?,
        n_tail: tail_count(dist.len(), p)?,
    })
}
