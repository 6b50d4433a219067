//! Range process of the walk perturbed at its global extrema.
//!
//! Translate so that the running minimum is `0` and the running maximum is
//! `n`. Until the range grows the walk is fair in the interior, steps up
//! with probability `q` from `0` and with probability `p` from `n`. Every
//! quantity here comes in two flavours: the closed form and an independent
//! first-step linear system.

mod exit;
mod laplace;
mod range_time;
mod ychain;

pub use exit::{exit_stats, ExitStats, StatsMode};
pub use laplace::{laplace_phi, LaplacePoint, PhiMode};
pub use range_time::{expected_range_time, hitting_table, HittingRow, RangeTimeMode};
pub use ychain::{deviation_factor, evolve_y_marginal, limiting_max_fraction, YChainState};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Bias;

/// Range `n >= 1` with the walker at one of its ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeProblem {
    n: u64,
    bias: Bias,
}

impl RangeProblem {
    pub fn new(n: u64, bias: Bias) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "range must be at least 1"));
        }
        Ok(RangeProblem { n, bias })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn bias(&self) -> &Bias {
        &self.bias
    }

    /// `d(n) = 1 - p - q + 2pq + p(1-q)n`, the common denominator of the
    /// closed forms.
    pub fn denominator(&self) -> f64 {
        let d = self.bias.renewal_constant() + self.bias.p() * (1.0 - self.bias.q()) * self.n as f64;
        assert!(d > 0.0, "closed-form denominator must be positive");
        d
    }
}
