use serde::{Deserialize, Serialize};

use super::{exit_stats, RangeProblem, StatsMode};
use crate::error::{Error, Result};
use crate::model::Bias;

/// Marginal of the side chain `Y_n` (`1` if the `n`-th range increase
/// happened at the maximum).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YChainState {
    pub n: u64,
    /// `P(Y_n = 1)`
    pub pi_n: f64,
    pub bias: Bias,
}

impl YChainState {
    pub fn new(n: u64, pi_n: f64, bias: Bias) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "range must be at least 1"));
        }
        if !(0.0..=1.0).contains(&pi_n) {
            return Err(Error::param("pi_n", format!("must be a probability, got {pi_n}")));
        }
        Ok(YChainState { n, pi_n, bias })
    }

    /// The walk's own initial marginal: the first step is fair.
    pub fn initial(bias: Bias) -> Self {
        YChainState { n: 1, pi_n: 0.5, bias }
    }

    /// `a = (1-p)/p`
    pub fn a(&self) -> f64 {
        (1.0 - self.bias.p()) / self.bias.p()
    }

    /// `b = q/(1-q)`
    pub fn b(&self) -> f64 {
        self.bias.q() / (1.0 - self.bias.q())
    }

    /// `δ_n = π_n - π_M`
    pub fn deviation(&self) -> f64 {
        self.pi_n - limiting_max_fraction(&self.bias)
    }

    /// One step `π_{n+1} = π_n p_M(n) + (1 - π_n)(1 - p_m(n))`.
    pub fn step(&self) -> Self {
        let stats = exit_stats(
            &RangeProblem::new(self.n, self.bias).expect("n >= 1"),
            StatsMode::ClosedForm,
        )
        .expect("closed forms are total");
        YChainState {
            n: self.n + 1,
            pi_n: self.pi_n * stats.p_max_renew + (1.0 - self.pi_n) * (1.0 - stats.p_min_renew),
            bias: self.bias,
        }
    }
}

/// `π_M = pq / (1 - p - q + 2pq)`, the limit of `P(Y_n = 1)`.
pub fn limiting_max_fraction(bias: &Bias) -> f64 {
    bias.p() * bias.q() / bias.renewal_constant()
}

/// Exact contraction of the deviation per step:
/// `δ_{n+1} = (p_M(n) + p_m(n) - 1) δ_n = (1 - c / d(n)) δ_n`.
///
/// `π_M` is an exact fixed point of every step of the recursion, so the
/// deviation obeys this homogeneous product with no remainder; the
/// `1 - (a+b)/n` envelope is its large-`n` expansion.
pub fn deviation_factor(bias: &Bias, n: u64) -> f64 {
    let c = bias.renewal_constant();
    1.0 - c / (c + bias.p() * (1.0 - bias.q()) * n as f64)
}

/// Run the recursion from `start.n` up to `target_n`.
pub fn evolve_y_marginal(start: YChainState, target_n: u64) -> Result<YChainState> {
    if target_n < start.n {
        return Err(Error::param(
            "target_n",
            format!("must be >= start n = {}, got {target_n}", start.n),
        ));
    }
    let mut state = start;
    while state.n < target_n {
        state = state.step();
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bias(p: f64, q: f64) -> Bias {
        Bias::new(p, q).unwrap()
    }

    #[test]
    fn limiting_fraction_values() {
        assert_eq!(limiting_max_fraction(&bias(0.5, 0.5)), 0.5);
        for p in [0.1, 0.37, 0.8] {
            assert!((limiting_max_fraction(&bias(p, 1.0 - p)) - 0.5).abs() < 1e-15);
        }
        assert!((limiting_max_fraction(&bias(0.9, 0.5)) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_is_stable() {
        for (p, q) in [(0.9, 0.5), (0.2, 0.7), (0.5, 0.5)] {
            let b = bias(p, q);
            let pm = limiting_max_fraction(&b);
            let mut s = YChainState::new(1, pm, b).unwrap();
            for k in 1..2000 {
                s = s.step();
                assert!((s.pi_n - pm).abs() <= 1e-12 * k as f64, "drift at n={}", s.n);
            }
        }
    }

    #[test]
    fn symmetric_deviation_decays_like_inverse_square() {
        // p = q = 1/2: δ_{n+1} = n/(n+2) δ_n, so δ_n = 2 δ_1 / (n(n+1)).
        let b = bias(0.5, 0.5);
        let s1 = YChainState::new(1, 1.0, b).unwrap();
        let mut s = s1;
        let mut devs = vec![0.0, s.deviation()];
        for _ in 0..4000 {
            s = s.step();
            devs.push(s.deviation());
        }
        for n in [1usize, 10, 100, 1000, 4000] {
            let exact = 2.0 * 0.5 / (n as f64 * (n as f64 + 1.0));
            assert!((devs[n] - exact).abs() <= 1e-9 * exact + 1e-15, "n={n}");
        }
        for n in [100usize, 500, 2000] {
            let ratio = devs[2 * n] / devs[n];
            assert!((ratio / 0.25 - 1.0).abs() < 0.1);
        }
    }

    #[test]
    fn deviation_follows_the_product_factor() {
        let b = bias(0.9, 0.1);
        let mut s = YChainState::new(1, 0.0, b).unwrap();
        let mut envelope = s.deviation();
        let mut prev = s.deviation().abs();
        for n in 1..3000u64 {
            envelope *= deviation_factor(&b, n);
            s = s.step();
            assert!((s.deviation() - envelope).abs() < 1e-12);
            // a + b = 2/9: slow but monotone decay
            assert!(s.deviation().abs() < prev);
            prev = s.deviation().abs();
        }
        let ab = s.a() + s.b();
        assert!((ab - 2.0 / 9.0).abs() < 1e-15);
        // factor -> 1 - (a+b)/n
        let n = 1_000_000u64;
        assert!(((1.0 - deviation_factor(&b, n)) * n as f64 - ab).abs() < 1e-5);
    }

    #[test]
    fn evolve_rejects_backwards_targets() {
        let s = YChainState::new(10, 0.3, bias(0.4, 0.6)).unwrap();
        assert!(evolve_y_marginal(s, 9).is_err());
        assert_eq!(evolve_y_marginal(s, 10).unwrap(), s);
        assert_eq!(evolve_y_marginal(s, 12).unwrap().n, 12);
        assert!(YChainState::new(0, 0.5, bias(0.4, 0.6)).is_err());
        assert!(YChainState::new(1, 1.5, bias(0.4, 0.6)).is_err());
    }
}
