//! Synthetic return paths from the two classical special cases of the
//! time-varying volatility model `r_t = mu + h_t u_t`: log-normal stochastic
//! volatility and GARCH(p, q).
//!
//! Simulators are plain state machines. The `simulate_*` functions run one
//! from a seed; holding on to the simulator afterwards lets callers continue
//! the same path forward (used for brute-force conditional oracles).

mod garch;
mod shocks;
mod sv;

pub use garch::{garch_ma_coefficients, simulate_garch, simulate_garch_default, GarchParams, GarchPath, GarchSimulator};
pub use shocks::Shock;
pub use sv::{simulate_sv, SvParams, SvPath, SvSimulator};

/// Default number of retained lags in the stochastic-volatility sum.
pub const DEFAULT_SV_TRUNCATION: usize = 200;

/// Default number of GARCH steps discarded before recording.
pub const DEFAULT_GARCH_BURNIN: usize = 1000;
