use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

use crate::error::{Error, Result};

/// Law of the iid standardized shocks `u_t` (zero mean, unit variance,
/// symmetric).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Shock {
    #[default]
    Normal,
    /// Student-t rescaled to unit variance; needs `dof > 2`.
    StudentT { dof: f64 },
}

impl Shock {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Shock::Normal => Ok(()),
            Shock::StudentT { dof } if dof > 2.0 && dof.is_finite() => Ok(()),
            Shock::StudentT { dof } => Err(Error::param(
                "dof",
                format!("Student-t shocks need finite dof > 2, got {dof}"),
            )),
        }
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Shock::Normal => StandardNormal.sample(rng),
            Shock::StudentT { dof } => {
                // validated on construction of every simulator
                let t: f64 = StudentT::new(dof).expect("dof > 2").sample(rng);
                t * ((dof - 2.0) / dof).sqrt()
            }
        }
    }
}
