use serde::{Deserialize, Serialize};

use super::{exit_stats, RangeProblem, StatsMode, YChainState};
use crate::error::{Error, Result};
use crate::model::Bias;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeTimeMode {
    /// `ρ_1 = 1` plus `Σ_{i=1}^{n-1} [D_M(i) π_i + D_m(i) (1 - π_i)]`.
    ExactRecursion,
    /// Leading term `q(1-p)/(1-p-q+2pq) · n²`.
    Asymptotic,
}

/// `E ρ_n`, the mean first time the range reaches `n`.
pub fn expected_range_time(bias: &Bias, n: u64, mode: RangeTimeMode) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "range must be at least 1"));
    }
    Ok(match mode {
        RangeTimeMode::Asymptotic => asymptotic(bias, n),
        RangeTimeMode::ExactRecursion => hitting_table(bias, n)?
            .last()
            .map(|row| row.e_rho_exact)
            .expect("n >= 1 rows"),
    })
}

fn asymptotic(bias: &Bias, n: u64) -> f64 {
    // E Δ_{n,n+1} / n -> a π_M + b (1 - π_M) = 2 q (1-p) / c, hence
    // E ρ_n ~ q (1-p) / c · n².
    let nf = n as f64;
    bias.q() * (1.0 - bias.p()) / bias.renewal_constant() * nf * nf
}

/// One row per range value, as written by the `hitting` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HittingRow {
    pub n: u64,
    pub d_max: f64,
    pub d_min: f64,
    pub p_max_renew: f64,
    pub p_min_renew: f64,
    pub pi_n: f64,
    pub e_rho_exact: f64,
    pub e_rho_asym: f64,
}

/// Rows `n = 1..=n_max` in a single `O(n_max)` pass.
pub fn hitting_table(bias: &Bias, n_max: u64) -> Result<Vec<HittingRow>> {
    if n_max == 0 {
        return Err(Error::param("n", "range must be at least 1"));
    }
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut y = YChainState::initial(*bias);
    // ρ_1 = 1: the first step always creates range 1.
    let mut e_rho = 1.0;
    for n in 1..=n_max {
        let stats = exit_stats(&RangeProblem::new(n, *bias)?, StatsMode::ClosedForm)?;
        rows.push(HittingRow {
            n,
            d_max: stats.d_max,
            d_min: stats.d_min,
            p_max_renew: stats.p_max_renew,
            p_min_renew: stats.p_min_renew,
            pi_n: y.pi_n,
            e_rho_exact: e_rho,
            e_rho_asym: asymptotic(bias, n),
        });
        e_rho += stats.d_max * y.pi_n + stats.d_min * (1.0 - y.pi_n);
        y = y.step();
    }
    Ok(rows)
}
