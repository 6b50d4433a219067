use serde::{Deserialize, Serialize};

use super::walker::{InfiniteWalker, Stepper};
use super::{per_replica, uniform, RngConfig};
use crate::error::{Error, Result};
use crate::model::{Memory, WalkParams};

/// The range first reaching `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeEvent {
    pub n: u64,
    /// Step at which the range first equals `n`.
    pub rho_n: u64,
    /// Whether the new range was created at the top (`Y_n = 1`).
    pub at_max: bool,
    /// `ρ_{n+1} - ρ_n`; `None` for the last event.
    pub delta_n: Option<u64>,
}

/// Range events `n = 1..=n_target` of one infinite-memory path.
pub fn range_process(params: &WalkParams, n_target: u64, rng: RngConfig) -> Result<Vec<RangeEvent>> {
    validate(params, n_target)?;
    let mut gen = rng.rng();
    let mut walker = InfiniteWalker::new(params.bias);
    let mut events: Vec<RangeEvent> = Vec::with_capacity(n_target as usize);
    let mut range = 0;
    while range < n_target {
        walker.step(uniform(&mut gen));
        let st = walker.state;
        if st.range() > range {
            range = st.range();
            if let Some(last) = events.last_mut() {
                last.delta_n = Some(st.step_count - last.rho_n);
            }
            events.push(RangeEvent {
                n: range,
                rho_n: st.step_count,
                at_max: st.position == st.global_max,
                delta_n: None,
            });
        }
    }
    Ok(events)
}

fn validate(params: &WalkParams, n_target: u64) -> Result<()> {
    if params.memory != Memory::Infinite {
        return Err(Error::WrongMemory { expected: "infinite" });
    }
    if n_target == 0 {
        return Err(Error::param("n", "range target must be at least 1"));
    }
    Ok(())
}

/// Range events of `replicas` independent paths, in replica order.
pub fn range_replicas(
    params: &WalkParams,
    n_target: u64,
    replicas: usize,
    rng: RngConfig,
) -> Result<Vec<Vec<RangeEvent>>> {
    validate(params, n_target)?;
    per_replica(rng, replicas, |cfg| range_process(params, n_target, cfg))
        .into_iter()
        .collect()
}
