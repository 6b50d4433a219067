//! Asymptotic variance of `X_n` in the CLT `(X_n - nΔ)/√n => N(0, σ²)`.
//!
//! With `f(η) = η¹` and `f̄ = f - Δ`,
//! `σ² = Var_π f + 2 Σ_{k≥1} Cov_π(f(Y_1), f(Y_{k+1}))`. Two routes:
//!
//! * solve the centered Poisson equation `g - Pg = f̄`, `π·g = 0`, then
//!   `σ² = 2⟨f̄, g⟩_π - ⟨f̄, f̄⟩_π`;
//! * sum the covariances `⟨f̄, P^k f̄⟩_π` until a geometric envelope bounds
//!   the tail.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{build_chain, stationary, ExactConfig, StationaryDistribution, TransitionOperator};
use crate::error::{Error, Result};
use crate::model::WalkParams;

/// Chains up to this window use a dense LU for the Poisson equation.
const DENSE_POISSON_MAX_L: usize = 10;
const TAIL_TOLERANCE: f64 = 1e-12;
const MAX_LAGS: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CltMethod {
    PoissonEquation,
    TruncatedCovariance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltVariance {
    pub sigma2: f64,
    pub method: CltMethod,
    /// Bound on the neglected covariance tail (zero for the Poisson route).
    pub truncation_error_bound: f64,
    /// Number of lags summed (truncated route) or solver iterations.
    pub work: usize,
}

/// Both routes; the Poisson value is the primary and the truncated sum the
/// cross-check.
pub fn clt_variance(params: &WalkParams, config: &ExactConfig) -> Result<(CltVariance, CltVariance)> {
    let op = build_chain(params, config)?;
    let st = stationary(&op, config)?;
    Ok((clt_variance_poisson(&op, &st)?, clt_variance_covariances(&op, &st)?))
}

fn centered_observable(op: &TransitionOperator, st: &StationaryDistribution) -> Vec<f64> {
    let f = op.first_increment();
    let mean: f64 = f.iter().zip(&st.weights).map(|(x, w)| x * w).sum();
    f.into_iter().map(|x| x - mean).collect()
}

fn pi_dot(pi: &[f64], a: &[f64], b: &[f64]) -> f64 {
    pi.iter().zip(a).zip(b).map(|((w, x), y)| w * x * y).sum()
}

pub fn clt_variance_poisson(op: &TransitionOperator, st: &StationaryDistribution) -> Result<CltVariance> {
    let fbar = centered_observable(op, st);
    let (g, work) = if op.window_len() <= DENSE_POISSON_MAX_L {
        (poisson_dense(op, &st.weights, &fbar)?, 0)
    } else {
        poisson_bicgstab(op, &st.weights, &fbar)?
    };
    let sigma2 = 2.0 * pi_dot(&st.weights, &fbar, &g) - pi_dot(&st.weights, &fbar, &fbar);
    Ok(CltVariance {
        sigma2,
        method: CltMethod::PoissonEquation,
        truncation_error_bound: 0.0,
        work,
    })
}

/// `(I - P + 1πᵀ) g = f̄` is nonsingular and its solution has `π·g = 0`.
fn poisson_dense(op: &TransitionOperator, pi: &[f64], fbar: &[f64]) -> Result<Vec<f64>> {
    let n = op.num_states();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for s in 0..n {
        a[(s, s)] += 1.0;
        for (t, pr) in op.row(s) {
            a[(s, t)] -= pr;
        }
        for (t, w) in pi.iter().enumerate() {
            a[(s, t)] += w;
        }
    }
    let rhs = DVector::from_column_slice(fbar);
    let g = a.lu().solve(&rhs).ok_or(Error::Singular("Poisson equation"))?;
    Ok(g.iter().copied().collect())
}

fn apply_poisson(op: &TransitionOperator, pi: &[f64], v: &[f64], out: &mut [f64]) {
    op.apply(v, out);
    let shift: f64 = pi.iter().zip(v).map(|(w, x)| w * x).sum();
    for (o, x) in out.iter_mut().zip(v) {
        *o = x - *o + shift;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Matrix-free BiCGSTAB on `(I - P + 1πᵀ) g = f̄`.
fn poisson_bicgstab(op: &TransitionOperator, pi: &[f64], fbar: &[f64]) -> Result<(Vec<f64>, usize)> {
    let n = fbar.len();
    let tol = 1e-15 * dot(fbar, fbar).sqrt().max(f64::MIN_POSITIVE);
    let mut x = vec![0.0; n];
    let mut r = fbar.to_vec();
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut t = vec![0.0; n];
    let max_iter = 100_000;
    for it in 0..max_iter {
        let rnorm = dot(&r, &r).sqrt();
        if rnorm <= tol {
            return Ok((x, it));
        }
        let rho_new = dot(&r_hat, &r);
        if rho_new == 0.0 {
            return Err(Error::Singular("BiCGSTAB breakdown"));
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        apply_poisson(op, pi, &p, &mut v);
        alpha = rho / dot(&r_hat, &v);
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if dot(&s, &s).sqrt() <= tol {
            for i in 0..n {
                x[i] += alpha * p[i];
            }
            return Ok((x, it + 1));
        }
        apply_poisson(op, pi, &s, &mut t);
        omega = dot(&t, &s) / dot(&t, &t);
        for i in 0..n {
            x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
    }
    Err(Error::NotConverged {
        solver: "BiCGSTAB",
        iterations: max_iter,
        residual: dot(&r, &r).sqrt(),
    })
}

/// Sum `Var_π f + 2 Σ_k ⟨f̄, P^k f̄⟩_π`, stopping once the geometric envelope
/// of `‖P^k f̄‖_∞` bounds the remaining tail below `1e-12`.
pub fn clt_variance_covariances(op: &TransitionOperator, st: &StationaryDistribution) -> Result<CltVariance> {
    let pi = &st.weights;
    let fbar = centered_observable(op, st);
    let l1: f64 = pi.iter().zip(&fbar).map(|(w, x)| w * x.abs()).sum();
    let mut sigma2 = pi_dot(pi, &fbar, &fbar);
    let mut v = fbar.clone();
    let mut next = vec![0.0; v.len()];
    let mut prev_norm = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut ratios: Vec<f64> = Vec::new();
    for k in 1..=MAX_LAGS {
        op.apply(&v, &mut next);
        // Project out the constant mode so that round-off in π cannot
        // accumulate; covariances are unchanged because π·f̄ = 0.
        let shift: f64 = pi.iter().zip(&next).map(|(w, x)| w * x).sum();
        for x in next.iter_mut() {
            *x -= shift;
        }
        std::mem::swap(&mut v, &mut next);
        sigma2 += 2.0 * pi_dot(pi, &fbar, &v);
        let norm = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if norm == 0.0 {
            return Ok(CltVariance {
                sigma2,
                method: CltMethod::TruncatedCovariance,
                truncation_error_bound: 0.0,
                work: k,
            });
        }
        ratios.push(norm / prev_norm);
        prev_norm = norm;
        if ratios.len() >= 16 {
            let window = &ratios[ratios.len() - 16..];
            let r = window.iter().cloned().fold(0.0f64, f64::max);
            if r < 1.0 {
                let bound = 2.0 * l1 * norm * r / (1.0 - r);
                if bound < TAIL_TOLERANCE {
                    return Ok(CltVariance {
                        sigma2,
                        method: CltMethod::TruncatedCovariance,
                        truncation_error_bound: bound,
                        work: k,
                    });
                }
            }
        }
    }
    Err(Error::NotConverged {
        solver: "covariance series",
        iterations: MAX_LAGS,
        residual: prev_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both(p: f64, q: f64, l: usize) -> (CltVariance, CltVariance) {
        clt_variance(&WalkParams::finite(p, q, l).unwrap(), &ExactConfig::default()).unwrap()
    }

    #[test]
    fn unperturbed_variance_is_one() {
        for l in [1, 3, 7] {
            let (a, b) = both(0.5, 0.5, l);
            assert!((a.sigma2 - 1.0).abs() < 1e-12);
            assert!((b.sigma2 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_state_closed_form() {
        // L = 1 is a two-state chain with second eigenvalue λ = p - q; the
        // increments form a stationary sequence with Cov(lag k) = Var·λ^k,
        // so σ² = Var (1 + λ)/(1 - λ) with Var = 1 - Δ².
        for (p, q) in [(0.6, 0.5), (0.9, 0.2), (0.3, 0.8)] {
            let (a, b) = both(p, q, 1);
            let pi_up = q / (1.0 - p + q);
            let delta = 2.0 * pi_up - 1.0;
            let lam = p - q;
            let expect = (1.0 - delta * delta) * (1.0 + lam) / (1.0 - lam);
            // π carries the 1e-13 stationarity residual
            assert!((a.sigma2 - expect).abs() < 1e-11 * expect, "{} vs {expect}", a.sigma2);
            assert!((b.sigma2 - expect).abs() < 1e-11 * expect);
        }
    }

    #[test]
    fn routes_agree() {
        for (p, q, l) in [(0.9, 0.1, 2), (0.8, 0.2, 4), (0.95, 0.15, 6), (0.3, 0.6, 9)] {
            let (a, b) = both(p, q, l);
            assert!(
                (a.sigma2 - b.sigma2).abs() < 1e-10,
                "p={p} q={q} L={l}: {} vs {}",
                a.sigma2,
                b.sigma2
            );
            assert!(b.truncation_error_bound < 1e-12);
            assert!(a.sigma2 >= 0.0);
        }
    }

    #[test]
    fn krylov_route_matches_dense() {
        let params = WalkParams::finite(0.8, 0.3, 8).unwrap();
        let cfg = ExactConfig::default();
        let op = build_chain(&params, &cfg).unwrap();
        let st = stationary(&op, &cfg).unwrap();
        let fbar = centered_observable(&op, &st);
        let dense = poisson_dense(&op, &st.weights, &fbar).unwrap();
        let (krylov, _) = poisson_bicgstab(&op, &st.weights, &fbar).unwrap();
        for (a, b) in dense.iter().zip(&krylov) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn recurrent_perturbation_increases_variability() {
        let (strong, _) = both(0.9, 0.1, 6);
        let (srw, _) = both(0.5, 0.5, 6);
        assert!(strong.sigma2 > srw.sigma2 && strong.sigma2 > 1.0);
    }
}
