use serde::{Deserialize, Serialize};

use super::{build_chain, stationary, ExactConfig, StationaryDistribution, TransitionOperator};
use crate::error::Result;
use crate::model::{DriftSign, ExtremeClass, WalkParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Recurrence {
    Recurrent,
    TransientRight,
    TransientLeft,
}

impl Recurrence {
    /// Decided by the sign of `p + q - 1` on the inputs, not by `Δ_L`.
    pub fn of(params: &WalkParams) -> Self {
        match params.bias.drift_sign() {
            DriftSign::Zero => Recurrence::Recurrent,
            DriftSign::Positive => Recurrence::TransientRight,
            DriftSign::Negative => Recurrence::TransientLeft,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedReport {
    pub l: usize,
    pub p: f64,
    pub q: f64,
    pub pi_max: f64,
    pub pi_min: f64,
    /// `Δ_L = (2p-1) π(max) + (2q-1) π(min)`
    pub delta: f64,
    pub recurrence: Recurrence,
    pub residual: f64,
}

pub fn speed(params: &WalkParams, config: &ExactConfig) -> Result<SpeedReport> {
    let op = build_chain(params, config)?;
    let st = stationary(&op, config)?;
    Ok(speed_from(params, &op, &st))
}

/// Speed report for an already solved chain.
pub fn speed_from(params: &WalkParams, op: &TransitionOperator, st: &StationaryDistribution) -> SpeedReport {
    let pi_max = st.mass_where(|s| op.class(s) == ExtremeClass::LocalMax);
    let pi_min = st.mass_where(|s| op.class(s) == ExtremeClass::LocalMin);
    let (p, q) = (params.p(), params.q());
    SpeedReport {
        l: op.window_len(),
        p,
        q,
        pi_max,
        pi_min,
        delta: (2.0 * p - 1.0) * pi_max + (2.0 * q - 1.0) * pi_min,
        recurrence: Recurrence::of(params),
        residual: st.residual,
    }
}
