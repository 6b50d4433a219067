use serde::{Deserialize, Serialize};

use super::RangeProblem;
use crate::error::Result;
use crate::tridiag;

/// Mean time until the range grows and the probability that it grows at the
/// same end again, for a walker starting at the maximum or at the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExitStats {
    /// `D_M(n)`: mean `ρ_{n+1} - ρ_n` given the walker is at the maximum.
    pub d_max: f64,
    /// `D_m(n)`: same, starting at the minimum.
    pub d_min: f64,
    /// `p_M(n)`: next increase at the maximum, given this one was.
    pub p_max_renew: f64,
    /// `p_m(n)`: next increase at the minimum, given this one was.
    pub p_min_renew: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsMode {
    ClosedForm,
    /// First-step tridiagonal systems for the exit time and exit side.
    Oracle,
}

pub fn exit_stats(problem: &RangeProblem, mode: StatsMode) -> Result<ExitStats> {
    match mode {
        StatsMode::ClosedForm => Ok(closed_form(problem)),
        StatsMode::Oracle => oracle(problem),
    }
}

fn closed_form(problem: &RangeProblem) -> ExitStats {
    let (p, q) = (problem.bias().p(), problem.bias().q());
    let n = problem.n() as f64;
    let c = problem.bias().renewal_constant();
    let d = problem.denominator();
    let linear = (p + 2.0 * q - 3.0 * p * q) * n;
    ExitStats {
        d_max: ((1.0 - p) * (1.0 - q) * n * n + linear + c) / d,
        d_min: (p * q * n * n + linear + c) / d,
        p_max_renew: (p * (1.0 - q) * n + p * q) / d,
        p_min_renew: (p * (1.0 - q) * n + (1.0 - p) * (1.0 - q)) / d,
    }
}

fn oracle(problem: &RangeProblem) -> Result<ExitStats> {
    let n = problem.n() as usize;
    let (p, q) = (problem.bias().p(), problem.bias().q());
    let size = n + 1;
    let mut lower = vec![-0.5; size - 1];
    let main = vec![1.0; size];
    let mut upper = vec![-0.5; size - 1];
    upper[0] = -q;
    lower[n - 1] = -(1.0 - p);

    // E_l = 1 + (step law) E_neighbours, exits cost nothing further.
    let times = tridiag::solve(&lower, &main, &upper, &vec![1.0; size])?;
    // h_l = P(exit through n+1), h_{-1} = 0, h_{n+1} = 1.
    let mut rhs = vec![0.0; size];
    rhs[n] = p;
    let up_exit = tridiag::solve(&lower, &main, &upper, &rhs)?;
    Ok(ExitStats {
        d_max: times[n],
        d_min: times[0],
        p_max_renew: up_exit[n],
        p_min_renew: 1.0 - up_exit[0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infinite::laplace::{laplace_phi, solve_discounted, LaplacePoint, PhiMode};
    use crate::model::Bias;

    fn problem(n: u64, p: f64, q: f64) -> RangeProblem {
        RangeProblem::new(n, Bias::new(p, q).unwrap()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn symmetric_walk_values() {
        for n in 1..=50u64 {
            let s = exit_stats(&problem(n, 0.5, 0.5), StatsMode::ClosedForm).unwrap();
            let nf = n as f64;
            assert!((s.d_max - (nf + 1.0)).abs() <= 1e-12 * nf);
            assert!((s.d_min - (nf + 1.0)).abs() <= 1e-12 * nf);
            assert!((s.p_max_renew - (nf + 1.0) / (nf + 2.0)).abs() < 1e-15);
        }
        let s = exit_stats(&problem(2, 0.5, 0.5), StatsMode::Oracle).unwrap();
        assert!((s.p_max_renew - 0.75).abs() < 1e-15);
    }

    #[test]
    fn n_one_by_hand() {
        // E0 = 1 + q E1, E1 = 1 + (1-p) E0
        let (p, q) = (0.3, 0.8);
        let e0 = (1.0 + q) / (1.0 - q + p * q);
        let e1 = (2.0 - p) / (1.0 - q + p * q);
        for mode in [StatsMode::ClosedForm, StatsMode::Oracle] {
            let s = exit_stats(&problem(1, p, q), mode).unwrap();
            assert!(rel(s.d_min, e0) < 1e-14 && rel(s.d_max, e1) < 1e-14);
        }
    }

    #[test]
    fn renewal_probabilities_solve_the_two_equation_system() {
        // p_M = p + (1-p)((n-1)/n p_M + (1 - p_m)/n)
        // p_m = 1 - q + q((n-1)/n p_m + (1 - p_M)/n)
        let grid = [0.15, 0.5, 0.85];
        for &p in &grid {
            for &q in &grid {
                for n in [1u64, 4, 33] {
                    let s = exit_stats(&problem(n, p, q), StatsMode::ClosedForm).unwrap();
                    let nf = n as f64;
                    let lhs_m = p + (1.0 - p) * ((nf - 1.0) / nf * s.p_max_renew + (1.0 - s.p_min_renew) / nf);
                    let lhs_n = 1.0 - q + q * ((nf - 1.0) / nf * s.p_min_renew + (1.0 - s.p_max_renew) / nf);
                    assert!((lhs_m - s.p_max_renew).abs() < 1e-14);
                    assert!((lhs_n - s.p_min_renew).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn large_n_slopes() {
        for (p, q) in [(0.3, 0.6), (0.8, 0.2), (0.5, 0.9)] {
            let n = 10_000u64;
            let s = exit_stats(&problem(n, p, q), StatsMode::ClosedForm).unwrap();
            let nf = n as f64;
            assert!(rel(s.d_max / nf, (1.0 - p) / p) < 0.01);
            assert!(rel(s.d_min / nf, q / (1.0 - q)) < 0.01);
            // p_M(n) = 1 - (1-p)/p / n + O(n^-2)
            assert!(((1.0 - s.p_max_renew) * nf - (1.0 - p) / p).abs() < 1e-2);
            assert!(((1.0 - s.p_min_renew) * nf - q / (1.0 - q)).abs() < 1e-2);
        }
    }

    #[test]
    fn means_are_minus_laplace_derivative() {
        // central difference at λ = 0 with step h; the first-step system is
        // still solvable for λ = -h
        let h = 1e-6;
        for (n, p, q) in [(1u64, 0.7, 0.4), (5, 0.2, 0.9), (20, 0.6, 0.6)] {
            let pr = problem(n, p, q);
            let s = exit_stats(&pr, StatsMode::ClosedForm).unwrap();
            for (l, mean) in [(0, s.d_min), (n, s.d_max)] {
                let f = |x: f64| solve_discounted(&pr, (-x).exp()).unwrap()[l as usize];
                let deriv = -(f(h) - f(-h)) / (2.0 * h);
                let at_h = laplace_phi(&pr, l, &LaplacePoint::new(h).unwrap(), PhiMode::LinearSolve).unwrap();
                assert_eq!(at_h, f(h));
                assert!(rel(deriv, mean) < 1e-4, "n={n} l={l}: {deriv} vs {mean}");
            }
        }
    }
}
