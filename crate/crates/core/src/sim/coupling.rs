//! Monotone couplings of two walks driven by the same uniform draws.
//!
//! Both walks step `+1` iff `u < P(up)`, so whenever the upper walk's
//! `P(up)` is at least the lower walk's, every step preserves the order.
//! Whether that holds in every configuration the order allows is decided
//! from the parameters up front; the run then checks the order at every step.

use serde::{Deserialize, Serialize};

use super::{per_replica, uniform, RngConfig};
use crate::error::{Error, Result};
use crate::model::{Bias, FiniteState, WalkParams, WalkState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CouplingKind {
    /// Componentwise order of the increment windows.
    WindowDominance,
    /// Order of the positions, with regeneration at joint all-`+1` windows.
    PositionDominance,
}

/// Which walk is on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// `a` dominates `b`.
    Above,
    /// `b` dominates `a` (the mirrored cases).
    Below,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub kind: CouplingKind,
    pub orientation: Orientation,
    pub steps: u64,
    pub violations: u64,
    /// Steps at which both windows are full of `+1` (position kind only).
    pub regeneration_times: Vec<u64>,
    /// `X_k - X̃_k` at each regeneration time.
    pub regeneration_gaps: Vec<i64>,
    pub final_gap: i64,
    /// `(X_n - X̃_n) / n`.
    pub mean_gap_growth: f64,
}

/// Sufficient conditions for `upper` to stay above `lower`, or the first
/// configuration in which it could fail.
fn order_preserved(kind: CouplingKind, upper: &Bias, lower: &Bias) -> std::result::Result<(), String> {
    let (pu, qu, pd, qd) = (upper.p(), upper.q(), lower.p(), lower.q());
    let checks: &[(bool, &str)] = match kind {
        // upper max: lower may be anything; upper min: lower is min; upper
        // neither: lower is neither or min
        CouplingKind::WindowDominance => &[
            (pu >= pd, "upper at max, lower at max needs p >= p~"),
            (pu >= qd, "upper at max, lower at min needs p >= q~"),
            (pu >= 0.5, "upper at max, lower neither needs p >= 1/2"),
            (qu >= qd, "both at min needs q >= q~"),
            (qd <= 0.5, "upper neither, lower at min needs q~ <= 1/2"),
        ],
        // only configurations reachable with equal positions matter; the gap
        // is otherwise at least 2
        CouplingKind::PositionDominance => &[
            (pu >= pd, "both at max needs p >= p~"),
            (pd <= 0.5, "upper neither, lower at max needs p~ <= 1/2"),
            (qu >= pd, "upper at min, lower at max needs q >= p~"),
            (qu >= 0.5, "upper at min, lower neither needs q >= 1/2"),
            (qu >= qd, "both at min needs q >= q~"),
        ],
    };
    match checks.iter().find(|(ok, _)| !ok) {
        None => Ok(()),
        Some((_, why)) => Err((*why).to_string()),
    }
}

/// Orientation in which the pair is a valid monotone coupling.
pub fn coupling_orientation(kind: CouplingKind, a: &WalkParams, b: &WalkParams) -> Result<Orientation> {
    let la = a.window_len()?;
    let lb = b.window_len()?;
    if la != lb {
        return Err(Error::InvalidCoupling(format!("window lengths differ ({la} vs {lb})")));
    }
    if a == b {
        return Ok(Orientation::Above);
    }
    let above = order_preserved(kind, &a.bias, &b.bias);
    if above.is_ok() {
        return Ok(Orientation::Above);
    }
    if order_preserved(kind, &b.bias, &a.bias).is_ok() {
        return Ok(Orientation::Below);
    }
    Err(Error::InvalidCoupling(format!(
        "{kind:?}: ({}, {}) vs ({}, {}) is not order preserving in either direction: {}",
        a.p(),
        a.q(),
        b.p(),
        b.q(),
        above.unwrap_err()
    )))
}

pub fn coupled_run(
    kind: CouplingKind,
    a: &WalkParams,
    b: &WalkParams,
    steps: u64,
    rng: RngConfig,
) -> Result<CouplingReport> {
    if steps == 0 {
        return Err(Error::param("steps", "must be at least 1"));
    }
    let orientation = coupling_orientation(kind, a, b)?;
    let l = a.window_len()?;
    let mut gen = rng.rng();
    let (mut x, mut y) = (FiniteState::start(l), FiniteState::start(l));
    let mut report = CouplingReport {
        kind,
        orientation,
        steps,
        violations: 0,
        regeneration_times: Vec::new(),
        regeneration_gaps: Vec::new(),
        final_gap: 0,
        mean_gap_growth: 0.0,
    };
    for k in 1..=steps {
        let u = uniform(&mut gen);
        x = x.advance(u, &a.bias);
        y = y.advance(u, &b.bias);
        let (hi, lo) = match orientation {
            Orientation::Above => (&x, &y),
            Orientation::Below => (&y, &x),
        };
        let ok = match kind {
            CouplingKind::WindowDominance => hi.window.dominates(&lo.window),
            CouplingKind::PositionDominance => hi.position >= lo.position,
        };
        if !ok {
            report.violations += 1;
        }
        if kind == CouplingKind::PositionDominance && x.window.all_up() && y.window.all_up() {
            report.regeneration_times.push(k);
            report.regeneration_gaps.push(x.position - y.position);
        }
    }
    report.final_gap = x.position - y.position;
    report.mean_gap_growth = report.final_gap as f64 / steps as f64;
    Ok(report)
}

/// `runs` independent coupled runs, in replica order.
pub fn coupled_runs(
    kind: CouplingKind,
    a: &WalkParams,
    b: &WalkParams,
    steps: u64,
    runs: usize,
    rng: RngConfig,
) -> Result<Vec<CouplingReport>> {
    coupling_orientation(kind, a, b)?;
    per_replica(rng, runs, |cfg| coupled_run(kind, a, b, steps, cfg))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(p: f64, q: f64, l: usize) -> WalkParams {
        WalkParams::finite(p, q, l).unwrap()
    }

    #[test]
    fn window_pairing_from_the_construction() {
        let r = coupled_run(
            CouplingKind::WindowDominance,
            &fin(0.8, 0.4, 4),
            &fin(0.8, 0.2, 4),
            100_000,
            RngConfig::new(1, 0),
        )
        .unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.orientation, Orientation::Above);
        assert!(r.final_gap >= 0);
    }

    #[test]
    fn position_pairing_from_the_construction() {
        let r = coupled_run(
            CouplingKind::PositionDominance,
            &fin(0.3, 0.9, 4),
            &fin(0.1, 0.9, 4),
            100_000,
            RngConfig::new(2, 0),
        )
        .unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.mean_gap_growth > 0.0);
        assert!(!r.regeneration_times.is_empty());
        assert!(r.regeneration_gaps.windows(2).all(|g| g[1] >= g[0]));
    }

    #[test]
    fn mirrored_cases_run_below() {
        // p + q < 1 with p >= 1/2 >= q, against (1-q, q)
        let r = coupled_run(
            CouplingKind::WindowDominance,
            &fin(0.6, 0.2, 5),
            &fin(0.8, 0.2, 5),
            20_000,
            RngConfig::new(3, 0),
        )
        .unwrap();
        assert_eq!((r.orientation, r.violations), (Orientation::Below, 0));
        // p + q < 1 with p <= 1/2 <= q, against (p, 1-p)
        let r = coupled_run(
            CouplingKind::PositionDominance,
            &fin(0.1, 0.7, 5),
            &fin(0.1, 0.9, 5),
            20_000,
            RngConfig::new(4, 0),
        )
        .unwrap();
        assert_eq!((r.orientation, r.violations), (Orientation::Below, 0));
        assert!(r.mean_gap_growth < 0.0);
    }

    #[test]
    fn identical_parameters_never_separate() {
        let p = fin(0.95, 0.15, 6);
        for kind in [CouplingKind::WindowDominance, CouplingKind::PositionDominance] {
            let r = coupled_run(kind, &p, &p, 10_000, RngConfig::new(5, 0)).unwrap();
            assert_eq!((r.violations, r.final_gap), (0, 0));
            assert!(r.regeneration_gaps.iter().all(|&g| g == 0));
        }
    }

    #[test]
    fn rejects_invalid_pairings() {
        // the position pair is not window ordered
        let err = coupled_run(
            CouplingKind::WindowDominance,
            &fin(0.3, 0.9, 4),
            &fin(0.1, 0.9, 4),
            10,
            RngConfig::new(0, 0),
        );
        assert!(matches!(err, Err(Error::InvalidCoupling(_))));
        assert!(coupled_run(
            CouplingKind::PositionDominance,
            &fin(0.5, 0.5, 3),
            &fin(0.5, 0.5, 4),
            10,
            RngConfig::new(0, 0)
        )
        .is_err());
        let inf = WalkParams::infinite(0.5, 0.5).unwrap();
        assert!(coupled_run(CouplingKind::PositionDominance, &inf, &inf, 10, RngConfig::new(0, 0)).is_err());
    }
}
