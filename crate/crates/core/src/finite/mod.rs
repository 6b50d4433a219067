//! Exact analysis of the window chain on `{-1,+1}^L`.

mod chain;
mod clt;
mod speed;
mod stationary;

pub use chain::{build_chain, TransitionOperator};
pub use clt::{clt_variance, clt_variance_covariances, clt_variance_poisson, CltMethod, CltVariance};
pub use speed::{speed, speed_from, Recurrence, SpeedReport};
pub use stationary::{stationary, stationary_dense, StationaryDistribution};

use serde::{Deserialize, Serialize};

/// Name of the environment variable overriding [`ExactConfig::max_window`].
pub const MAX_WINDOW_ENV: &str = "PWALK_MAX_L";

/// Limits for the exact solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactConfig {
    /// Largest `L` for which the `2^L` chain is built.
    pub max_window: usize,
    /// Stationarity tolerance on `max |πP - π|`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_window: 24,
            tolerance: 1e-13,
            max_iterations: 10_000_000,
        }
    }
}

impl ExactConfig {
    /// Defaults, with the state cap taken from `PWALK_MAX_L` when set.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(cap) = std::env::var(MAX_WINDOW_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            cfg.max_window = cap.clamp(1, 30);
        }
        cfg
    }
}
