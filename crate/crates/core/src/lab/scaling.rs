use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::finite::{speed, ExactConfig};
use crate::model::WalkParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiMaxScalingRow {
    pub l: usize,
    pub pi_max: f64,
    /// `(1/π(max) - 1) / (1 - p)`
    pub a_l: f64,
    /// `a_L / √L`
    pub ratio: f64,
}

/// Exact `π(max)` at `q = 1/2` and the derived `a_L`.
pub fn pi_max_scaling(p: f64, l_values: &[usize], config: &ExactConfig) -> Result<Vec<PiMaxScalingRow>> {
    l_values
        .iter()
        .map(|&l| {
            let r = speed(&WalkParams::finite(p, 0.5, l)?, config)?;
            let a_l = (1.0 / r.pi_max - 1.0) / (1.0 - p);
            Ok(PiMaxScalingRow {
                l,
                pi_max: r.pi_max,
                a_l,
                ratio: a_l / (l as f64).sqrt(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SrwMaxRow {
    pub l: usize,
    pub pi_max: f64,
    /// `1/√(πL)`
    pub reference: f64,
    /// `π(max) / reference`
    pub ratio: f64,
    /// `π(max) / √(2/(πL))`, the large-`L` behaviour of `C(L, ⌊L/2⌋) / 2^L`.
    pub central_ratio: f64,
}

/// Exact `π(max)` of the unperturbed walk against `1/√(πL)`.
pub fn srw_max_probability(l_values: &[usize], config: &ExactConfig) -> Result<Vec<SrwMaxRow>> {
    l_values
        .iter()
        .map(|&l| {
            let pi_max = speed(&WalkParams::finite(0.5, 0.5, l)?, config)?.pi_max;
            let lf = l as f64;
            let reference = 1.0 / (std::f64::consts::PI * lf).sqrt();
            Ok(SrwMaxRow {
                l,
                pi_max,
                reference,
                ratio: pi_max / reference,
                central_ratio: pi_max / (2.0 / (std::f64::consts::PI * lf)).sqrt(),
            })
        })
        .collect()
}

/// Number of windows with all partial sums `>= 0`, over `2^L`.
pub fn nonnegative_window_fraction(l: u32) -> f64 {
    // ballot count: C(L, ⌊L/2⌋)
    let k = (l / 2) as u64;
    let mut c = 1.0f64;
    for i in 0..k {
        c = c * (l as u64 - i) as f64 / (i + 1) as f64;
    }
    c / 2f64.powi(l as i32)
}
