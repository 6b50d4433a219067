use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::{speed, ExactConfig};
use crate::model::{Bias, WalkParams};
use crate::sim::{speed_estimate, RngConfig};

/// `√(2L ln ln L)`, defined for `L >= 3`.
pub fn scaling_factor(l: usize) -> Option<f64> {
    let ll = (l as f64).ln().ln();
    (l >= 3 && ll > 0.0).then(|| (2.0 * l as f64 * ll).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McBudget {
    pub steps: u64,
    pub replicas: usize,
}

impl Default for McBudget {
    fn default() -> Self {
        McBudget {
            steps: 10_000_000,
            replicas: 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ModePolicy {
    /// Exact up to the analysis cap, Monte Carlo above.
    #[default]
    Auto,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowMode {
    Exact,
    MonteCarlo,
}

impl RowMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RowMode::Exact => "exact",
            RowMode::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub bias: Bias,
    pub l_values: Vec<usize>,
    pub policy: ModePolicy,
    pub budget: McBudget,
    /// Row `L` uses the streams starting at `rng.replica_index + (L << 32)`.
    pub rng: RngConfig,
    pub exact: ExactConfig,
}

impl SweepSpec {
    pub fn mode_for(&self, l: usize) -> RowMode {
        match self.policy {
            ModePolicy::Auto if l <= self.exact.max_window => RowMode::Exact,
            _ => RowMode::MonteCarlo,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub l: usize,
    pub delta: f64,
    /// Zero for exact rows.
    pub stderr: f64,
    /// `delta · √(2L ln ln L)` for `L >= 3`.
    pub scaled: Option<f64>,
    pub mode: RowMode,
    /// Set when the row failed; `delta` is then NaN.
    pub error: Option<String>,
}

fn run_row(spec: &SweepSpec, l: usize) -> SweepRow {
    let mode = spec.mode_for(l);
    let result = WalkParams::finite(spec.bias.p(), spec.bias.q(), l).and_then(|params| match mode {
        RowMode::Exact => speed(&params, &spec.exact).map(|r| (r.delta, 0.0)),
        RowMode::MonteCarlo => {
            let rng = RngConfig::new(spec.rng.seed, spec.rng.replica_index.wrapping_add((l as u64) << 32));
            speed_estimate(&params, spec.budget.steps, spec.budget.replicas, rng).map(|e| (e.mean, e.stderr))
        }
    });
    match result {
        Ok((delta, stderr)) => SweepRow {
            l,
            delta,
            stderr,
            scaled: scaling_factor(l).map(|f| delta * f),
            mode,
            error: None,
        },
        Err(e) => SweepRow {
            l,
            delta: f64::NAN,
            stderr: f64::NAN,
            scaled: None,
            mode,
            error: Some(e.to_string()),
        },
    }
}

/// Speed for every `L`, rows sorted by `L`. Failing rows are kept with their
/// error message.
pub fn speed_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.l_values.is_empty() {
        return Err(Error::param("L-values", "at least one window length is required"));
    }
    let mut ls = spec.l_values.clone();
    ls.sort_unstable();
    ls.dedup();
    Ok(ls.par_iter().map(|&l| run_row(spec, l)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub c: f64,
    /// `(L, scaled - c)`.
    pub residuals: Vec<(usize, f64)>,
    /// `max |scaled - c| / |c|`.
    pub max_relative_spread: f64,
    pub weighted: bool,
}

/// Fits `Δ_L ≈ c / √(2L ln ln L)` over rows with `L >= l_min`.
///
/// Weights are inverse variances of the scaled values when every row has a
/// positive standard error, equal otherwise.
pub fn fit_speed_scaling(rows: &[SweepRow], l_min: usize) -> Result<ScalingFit> {
    let used: Vec<(&SweepRow, f64)> = rows
        .iter()
        .filter(|r| r.l >= l_min.max(3) && r.error.is_none())
        .filter_map(|r| r.scaled.map(|s| (r, s)))
        .collect();
    if used.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 rows with L >= {}, got {}",
            l_min.max(3),
            used.len()
        )));
    }
    if used.iter().all(|(r, _)| r.delta == 0.0) {
        return Err(Error::DegenerateFit(
            "all speeds are zero (recurrent case p + q = 1); there is no scale to fit".into(),
        ));
    }
    let weighted = used.iter().all(|(r, _)| r.stderr > 0.0);
    let weight = |r: &SweepRow| {
        if weighted {
            let se = r.stderr * scaling_factor(r.l).unwrap();
            1.0 / (se * se)
        } else {
            1.0
        }
    };
    let wsum: f64 = used.iter().map(|(r, _)| weight(r)).sum();
    let c = used.iter().map(|(r, s)| weight(r) * s).sum::<f64>() / wsum;
    let residuals: Vec<(usize, f64)> = used.iter().map(|(r, s)| (r.l, s - c)).collect();
    let max_relative_spread = residuals.iter().fold(0.0f64, |m, (_, d)| m.max(d.abs())) / c.abs();
    Ok(ScalingFit {
        c,
        residuals,
        max_relative_spread,
        weighted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: f64, q: f64, ls: &[usize]) -> SweepSpec {
        SweepSpec {
            bias: Bias::new(p, q).unwrap(),
            l_values: ls.to_vec(),
            policy: ModePolicy::Auto,
            budget: McBudget {
                steps: 200_000,
                replicas: 8,
            },
            rng: RngConfig::new(1, 0),
            exact: ExactConfig::default(),
        }
    }

    fn synthetic(l: usize, delta: f64, stderr: f64) -> SweepRow {
        SweepRow {
            l,
            delta,
            stderr,
            scaled: scaling_factor(l).map(|f| delta * f),
            mode: RowMode::Exact,
            error: None,
        }
    }

    #[test]
    fn scaling_factor_domain() {
        assert_eq!(scaling_factor(1), None);
        assert_eq!(scaling_factor(2), None);
        let f = scaling_factor(16).unwrap();
        assert!((f - (32.0 * 16f64.ln().ln()).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn two_state_row() {
        let rows = speed_sweep(&spec(0.6, 0.5, &[1])).unwrap();
        assert!((rows[0].delta - 1.0 / 9.0).abs() < 1e-12);
        assert_eq!(
            (rows[0].stderr, rows[0].scaled, rows[0].mode),
            (0.0, None, RowMode::Exact)
        );
    }

    #[test]
    fn recurrent_rows_vanish() {
        let mut s = spec(0.9, 0.1, &[4, 2, 30, 6]);
        s.exact.max_window = 10;
        let rows = speed_sweep(&s).unwrap();
        assert_eq!(rows.iter().map(|r| r.l).collect::<Vec<_>>(), vec![2, 4, 6, 30]);
        for r in &rows {
            match r.mode {
                RowMode::Exact => assert!(r.delta.abs() < 1e-12),
                RowMode::MonteCarlo => assert!(r.delta.abs() < 3.0 * r.stderr + 1e-12),
            }
        }
        assert!(fit_speed_scaling(&rows[1..3], 3).is_err());
    }

    #[test]
    fn exact_and_monte_carlo_rows_agree() {
        let exact = speed_sweep(&spec(0.95, 0.15, &[3, 6])).unwrap();
        let mut s = spec(0.95, 0.15, &[3, 6]);
        s.policy = ModePolicy::MonteCarlo;
        let mc = speed_sweep(&s).unwrap();
        for (a, b) in exact.iter().zip(&mc) {
            assert_eq!(b.mode, RowMode::MonteCarlo);
            assert!((a.delta - b.delta).abs() < 4.0 * b.stderr, "L={}", a.l);
        }
    }

    #[test]
    fn failed_rows_are_recorded() {
        let rows = speed_sweep(&spec(0.7, 0.4, &[2, 70])).unwrap();
        assert!(rows[0].error.is_none());
        assert!(rows[1].error.is_some() && rows[1].delta.is_nan());
    }

    #[test]
    fn fit_of_its_own_model() {
        let rows: Vec<SweepRow> = [3, 5, 8, 13, 21]
            .iter()
            .map(|&l| synthetic(l, 2.0 / scaling_factor(l).unwrap(), 0.0))
            .collect();
        let fit = fit_speed_scaling(&rows, 3).unwrap();
        assert!((fit.c - 2.0).abs() < 1e-14);
        assert!(fit.residuals.iter().all(|(_, r)| r.abs() < 1e-14));
        assert!(!fit.weighted);
        assert!(matches!(fit_speed_scaling(&rows[..2], 3), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn weighted_fit_prefers_precise_rows() {
        let rows = vec![
            synthetic(4, 0.1, 1e-4),
            synthetic(8, 0.1, 1e-4),
            synthetic(16, 0.5, 1.0),
        ];
        let fit = fit_speed_scaling(&rows, 3).unwrap();
        assert!(fit.weighted);
        let target = 0.1 * scaling_factor(4).unwrap();
        assert!((fit.c - target).abs() < 0.1);
    }
}
