use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{ExactConfig, TransitionOperator};
use crate::error::{Error, Result};

/// Sweeps below this many states run sequentially.
const PARALLEL_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone)]
pub struct StationaryDistribution {
    pub weights: Vec<f64>,
    /// `max |πP - π|` of `weights`.
    pub residual: f64,
    pub iterations: usize,
}

impl StationaryDistribution {
    pub fn mass_where(&self, mut pred: impl FnMut(usize) -> bool) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(s, _)| pred(*s))
            .map(|(_, w)| *w)
            .sum()
    }
}

/// Renormalize every this many sweeps; `P` preserves mass up to rounding.
const NORMALIZE_EVERY: usize = 64;

/// `out = pi P`, returning `max |out - pi|` from the same pass.
fn sweep(op: &TransitionOperator, pi: &[f64], out: &mut [f64]) -> f64 {
    let pull = |t: usize| {
        let [a, b] = op.predecessors(t);
        pi[a] * op.edge(a, t) + pi[b] * op.edge(b, t)
    };
    if pi.len() < PARALLEL_THRESHOLD {
        let mut residual = 0.0f64;
        for (t, o) in out.iter_mut().enumerate() {
            *o = pull(t);
            residual = residual.max((*o - pi[t]).abs());
        }
        return residual;
    }
    // Each entry depends only on its two predecessors and the maximum does
    // not depend on the reduction order, so the parallel sweep is bitwise
    // identical to the sequential one.
    out.par_chunks_mut(1 << 12)
        .enumerate()
        .map(|(c, chunk)| {
            let base = c << 12;
            let mut residual = 0.0f64;
            for (i, o) in chunk.iter_mut().enumerate() {
                *o = pull(base + i);
                residual = residual.max((*o - pi[base + i]).abs());
            }
            residual
        })
        .reduce(|| 0.0, f64::max)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn normalize(v: &mut [f64]) {
    // sequential sum keeps the order fixed
    let total: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= total;
    }
}

/// Power iteration from the uniform vector until `max |πP - π| <= tol`.
pub fn stationary(op: &TransitionOperator, config: &ExactConfig) -> Result<StationaryDistribution> {
    let n = op.num_states();
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 0..config.max_iterations {
        residual = sweep(op, &pi, &mut next);
        if residual <= config.tolerance {
            normalize(&mut pi);
            sweep(op, &pi, &mut next);
            residual = max_abs_diff(&pi, &next);
            if residual <= config.tolerance {
                return Ok(StationaryDistribution {
                    weights: pi,
                    residual,
                    iterations: it,
                });
            }
        }
        std::mem::swap(&mut pi, &mut next);
        if it % NORMALIZE_EVERY == NORMALIZE_EVERY - 1 {
            normalize(&mut pi);
        }
    }
    Err(Error::NotConverged {
        solver: "power iteration",
        iterations: config.max_iterations,
        residual,
    })
}

/// Direct solve of `π (P - I) = 0`, `Σ π = 1` by dense LU. Cross-check for
/// small windows only.
pub fn stationary_dense(op: &TransitionOperator) -> Result<StationaryDistribution> {
    let n = op.num_states();
    if op.window_len() > 12 {
        return Err(Error::param("L", "dense solve is limited to L <= 12"));
    }
    // Rows of the transposed system; the last equation is normalization.
    let mut a = DMatrix::<f64>::zeros(n, n);
    for s in 0..n {
        for (t, pr) in op.row(s) {
            a[(t, s)] += pr;
        }
        a[(s, s)] -= 1.0;
    }
    for s in 0..n {
        a[(n - 1, s)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(n);
    rhs[n - 1] = 1.0;
    let weights: Vec<f64> = a
        .lu()
        .solve(&rhs)
        .ok_or(Error::Singular("dense stationary solve"))?
        .iter()
        .copied()
        .collect();
    let mut image = vec![0.0; n];
    op.apply_left(&weights, &mut image);
    Ok(StationaryDistribution {
        residual: max_abs_diff(&weights, &image),
        weights,
        iterations: 0,
    })
}
