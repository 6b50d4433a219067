use serde::{Deserialize, Serialize};

use super::trajectory::final_position;
use super::walker::Walker;
use super::{per_replica, RngConfig};
use crate::error::{Error, Result};
use crate::finite::{build_chain, clt_variance_covariances, clt_variance_poisson, speed_from, stationary, ExactConfig};
use crate::model::WalkParams;
use crate::stats::{ks_normal, Estimate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltExperiment {
    pub delta: f64,
    /// Poisson-equation value, used for the KS reference.
    pub sigma2: f64,
    /// Truncated covariance series, as a cross-check.
    pub sigma2_covariance: f64,
    /// `(X_n - nΔ) / √n` per replica.
    pub samples: Vec<f64>,
    pub ks_distance: f64,
    pub sample_mean: Estimate,
}

pub fn clt_experiment(
    params: &WalkParams,
    steps: u64,
    replicas: usize,
    rng: RngConfig,
    config: &ExactConfig,
) -> Result<CltExperiment> {
    if steps < 1000 {
        return Err(Error::param("n", "CLT horizon must be at least 1000"));
    }
    if replicas < 2 {
        return Err(Error::param("replicas", "need at least 2 replicas"));
    }
    let op = build_chain(params, config)?;
    let st = stationary(&op, config)?;
    let delta = speed_from(params, &op, &st).delta;
    let sigma2 = clt_variance_poisson(&op, &st)?.sigma2;
    let sigma2_covariance = clt_variance_covariances(&op, &st)?.sigma2;

    let base = Walker::new(params);
    let n = steps as f64;
    let samples = per_replica(rng, replicas, |cfg| {
        let x = final_position(&mut base.spawn(), &mut cfg.rng(), steps) as f64;
        (x - n * delta) / n.sqrt()
    });
    Ok(CltExperiment {
        delta,
        sigma2,
        sigma2_covariance,
        ks_distance: ks_normal(&samples, sigma2),
        sample_mean: Estimate::from_samples(&samples),
        samples,
    })
}
