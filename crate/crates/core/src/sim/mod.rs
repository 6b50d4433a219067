//! Seeded Monte Carlo engine.
//!
//! Every run is driven by one [`RngConfig`]: a ChaCha8 generator keyed by
//! `seed` with the stream selected by `replica_index`. Multi-replica
//! experiments give replica `i` the stream `replica_index + i`, run the
//! replicas on the rayon pool and collect results in replica order, so
//! outputs do not depend on the number of threads.

mod clt;
mod cookie;
mod coupling;
mod range;
mod trajectory;
mod walker;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use clt::{clt_experiment, CltExperiment};
pub use cookie::{cookie_equivalence, cookie_path_probability, perturbed_path_probability, CookieWalk};
pub use coupling::{coupled_run, coupled_runs, coupling_orientation, CouplingKind, CouplingReport, Orientation};
pub use range::{range_process, range_replicas, RangeEvent};
pub use trajectory::{simulate, speed_estimate, Record, Trajectory, TrajectorySummary};
pub use walker::{DequeWalker, InfiniteWalker, Stepper, TableWalker, Walker, TABLE_MAX_L};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngConfig {
    pub seed: u64,
    pub replica_index: u64,
}

impl RngConfig {
    pub fn new(seed: u64, replica_index: u64) -> Self {
        RngConfig { seed, replica_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.replica_index);
        rng
    }

    /// Configuration of the `i`-th replica of an experiment based here.
    pub fn replica(&self, i: u64) -> Self {
        RngConfig {
            seed: self.seed,
            replica_index: self.replica_index + i,
        }
    }
}

/// Uniform draw on `[0, 1)`.
#[inline]
pub(crate) fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.random::<f64>()
}

/// Runs `f` for replicas `0..replicas` in parallel and returns the results in
/// replica order.
pub(crate) fn per_replica<T, F>(base: RngConfig, replicas: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(RngConfig) -> T + Sync + Send,
{
    (0..replicas as u64)
        .into_par_iter()
        .map(|i| f(base.replica(i)))
        .collect()
}
