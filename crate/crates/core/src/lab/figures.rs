use serde::{Deserialize, Serialize};

use super::sweep::{fit_speed_scaling, scaling_factor, speed_sweep, ScalingFit, SweepRow, SweepSpec};
use crate::error::Result;
use crate::finite::{speed, ExactConfig};
use crate::model::{Memory, WalkParams};
use crate::sim::{simulate, Record, RngConfig, Trajectory};

/// Recurrent parameter pairs (`p + q = 1`).
pub const FIG1_PAIRS: [(f64, f64); 3] = [(0.9, 0.1), (0.5, 0.5), (0.1, 0.9)];
/// The two transient parameter pairs with equal drift `p + q - 1`.
pub const FIG3_PAIRS: [(f64, f64); 2] = [(0.95, 0.15), (0.15, 0.95)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureSeries {
    pub p: f64,
    pub q: f64,
    /// Exact speed when the memory is finite and within the cap.
    pub delta: Option<f64>,
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectorySpec {
    pub memory: Memory,
    pub steps: u64,
    pub record: Record,
    /// Series `i` uses replica stream `rng.replica_index + i`.
    pub rng: RngConfig,
}

fn series(pairs: &[(f64, f64)], spec: &TrajectorySpec, exact: &ExactConfig) -> Result<Vec<FigureSeries>> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, &(p, q))| {
            let params = WalkParams::new(p, q, spec.memory)?;
            let delta = match spec.memory {
                Memory::Finite(l) if l <= exact.max_window => Some(speed(&params, exact)?.delta),
                _ => None,
            };
            Ok(FigureSeries {
                p,
                q,
                delta,
                trajectory: simulate(&params, spec.steps, spec.rng.replica(i as u64), spec.record)?,
            })
        })
        .collect()
}

pub fn fig1(spec: &TrajectorySpec, exact: &ExactConfig) -> Result<Vec<FigureSeries>> {
    series(&FIG1_PAIRS, spec, exact)
}

pub fn fig3(spec: &TrajectorySpec, exact: &ExactConfig) -> Result<Vec<FigureSeries>> {
    series(&FIG3_PAIRS, spec, exact)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig2 {
    pub rows: Vec<SweepRow>,
    /// Absent when fewer than three usable rows exist.
    pub fit: Option<ScalingFit>,
    /// `(L, c / √(2L ln ln L))` for each fitted row.
    pub reference: Vec<(usize, f64)>,
}

pub fn fig2(spec: &SweepSpec) -> Result<Fig2> {
    let rows = speed_sweep(spec)?;
    let fit = fit_speed_scaling(&rows, 3).ok();
    let reference = match &fit {
        Some(f) => rows
            .iter()
            .filter_map(|r| scaling_factor(r.l).map(|s| (r.l, f.c / s)))
            .collect(),
        None => Vec::new(),
    };
    Ok(Fig2 { rows, fit, reference })
}
