use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::walker::{Stepper, Walker};
use super::{per_replica, uniform, RngConfig};
use crate::error::{Error, Result};
use crate::model::WalkParams;
use crate::stats::Estimate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Record {
    Full,
    /// Every `k`-th position.
    Thinned(u64),
    Summary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub steps: u64,
    pub final_position: i64,
    pub max: i64,
    pub min: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: WalkParams,
    /// `positions[i]` is `X` at step `i * stride`; empty for summaries.
    pub stride: u64,
    pub positions: Vec<i64>,
    pub summary: TrajectorySummary,
}

impl Trajectory {
    /// `(step, position)` pairs of the recorded points.
    pub fn points(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.positions
            .iter()
            .enumerate()
            .map(move |(i, &x)| (i as u64 * self.stride, x))
    }
}

fn drive_with<S: Stepper>(walker: &mut S, rng: &mut ChaCha8Rng, steps: u64, mut visit: impl FnMut(u64, i64)) {
    for k in 1..=steps {
        walker.step(uniform(rng));
        visit(k, walker.position());
    }
}

/// Advances `walker` by `steps`, calling `visit(k, X_k)` after each step.
/// The variant is matched once, outside the loop.
pub(crate) fn drive(walker: &mut Walker, rng: &mut ChaCha8Rng, steps: u64, visit: impl FnMut(u64, i64)) {
    match walker {
        Walker::Table(w) => drive_with(w, rng, steps, visit),
        Walker::Deque(w) => drive_with(w, rng, steps, visit),
        Walker::Infinite(w) => drive_with(w, rng, steps, visit),
    }
}

/// Final position after `steps` steps without recording anything.
pub(crate) fn final_position(walker: &mut Walker, rng: &mut ChaCha8Rng, steps: u64) -> i64 {
    fn run<S: Stepper>(w: &mut S, rng: &mut ChaCha8Rng, steps: u64) -> i64 {
        for _ in 0..steps {
            w.step(uniform(rng));
        }
        w.position()
    }
    match walker {
        Walker::Table(w) => run(w, rng, steps),
        Walker::Deque(w) => run(w, rng, steps),
        Walker::Infinite(w) => run(w, rng, steps),
    }
}

pub fn simulate(params: &WalkParams, steps: u64, rng: RngConfig, record: Record) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::param("steps", "must be at least 1"));
    }
    let stride = match record {
        Record::Full => 1,
        Record::Thinned(0) => return Err(Error::param("thin", "thinning interval must be at least 1")),
        Record::Thinned(k) => k,
        Record::Summary => 0,
    };
    let mut positions = Vec::new();
    if let Some(n) = steps.checked_div(stride) {
        positions.reserve(n as usize + 1);
        positions.push(0);
    }
    let (mut max, mut min) = (0i64, 0i64);
    let mut walker = Walker::new(params);
    let mut gen = rng.rng();
    drive(&mut walker, &mut gen, steps, |k, x| {
        max = max.max(x);
        min = min.min(x);
        if stride > 0 && k % stride == 0 {
            positions.push(x);
        }
    });
    Ok(Trajectory {
        params: *params,
        stride: stride.max(1),
        positions,
        summary: TrajectorySummary {
            steps,
            final_position: walker.position(),
            max,
            min,
        },
    })
}

/// Time-averaged speed `X_n / n` over independent replicas, with the replica
/// standard error.
pub fn speed_estimate(params: &WalkParams, steps: u64, replicas: usize, rng: RngConfig) -> Result<Estimate> {
    if steps == 0 || replicas == 0 {
        return Err(Error::param("steps/replicas", "must be at least 1"));
    }
    let base = Walker::new(params);
    let speeds = per_replica(rng, replicas, |cfg| {
        let mut w = base.spawn();
        final_position(&mut w, &mut cfg.rng(), steps) as f64 / steps as f64
    });
    Ok(Estimate::from_samples(&speeds))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_record_has_unit_increments() {
        let params = WalkParams::finite(0.95, 0.15, 5).unwrap();
        let t = simulate(&params, 1000, RngConfig::new(1, 0), Record::Full).unwrap();
        assert_eq!(t.positions.len(), 1001);
        assert!(t.positions.windows(2).all(|w| (w[1] - w[0]).abs() == 1));
        assert_eq!(*t.positions.last().unwrap(), t.summary.final_position);
        assert_eq!(t.summary.max, *t.positions.iter().max().unwrap());
        assert_eq!(t.summary.min, *t.positions.iter().min().unwrap());
    }

    #[test]
    fn thinning_and_summary_agree_with_full() {
        let params = WalkParams::infinite(0.7, 0.4).unwrap();
        let cfg = RngConfig::new(9, 3);
        let full = simulate(&params, 1000, cfg, Record::Full).unwrap();
        let thin = simulate(&params, 1000, cfg, Record::Thinned(7)).unwrap();
        let summary = simulate(&params, 1000, cfg, Record::Summary).unwrap();
        for (k, x) in thin.points() {
            assert_eq!(full.positions[k as usize], x);
        }
        assert_eq!(thin.positions.len(), 1000 / 7 + 1);
        assert!(summary.positions.is_empty());
        assert_eq!(summary.summary, full.summary);
    }

    #[test]
    fn rejects_empty_runs() {
        let params = WalkParams::finite(0.5, 0.5, 2).unwrap();
        assert!(simulate(&params, 0, RngConfig::new(0, 0), Record::Full).is_err());
        assert!(simulate(&params, 5, RngConfig::new(0, 0), Record::Thinned(0)).is_err());
    }

    #[test]
    fn speed_estimate_is_deterministic() {
        let params = WalkParams::finite(0.8, 0.4, 8).unwrap();
        let a = speed_estimate(&params, 10_000, 8, RngConfig::new(5, 0)).unwrap();
        let b = speed_estimate(&params, 10_000, 8, RngConfig::new(5, 0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.count, 8);
    }
}
