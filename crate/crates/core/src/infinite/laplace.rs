use super::RangeProblem;
use crate::error::{Error, Result};
use crate::tridiag;

/// Laplace variable `λ >= 0` and `ζ = e^λ + sqrt(e^{2λ} - 1)`.
///
/// Internally `ζ = e^θ` with `θ = acosh(e^λ)`, which keeps the powers of
/// `ζ` and their differences accurate at both ends of the `λ` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplacePoint {
    lambda: f64,
    theta: f64,
}

impl LaplacePoint {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::param("lambda", format!("must be finite and >= 0, got {lambda}")));
        }
        // acosh(e^λ) = λ + ln(1 + sqrt(1 - e^{-2λ}))
        let theta = lambda + (-(-2.0 * lambda).exp_m1()).sqrt().ln_1p();
        Ok(LaplacePoint { lambda, theta })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn zeta(&self) -> f64 {
        self.theta.exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiMode {
    /// The printed expressions for `φ_0` and `φ_n` (requires `λ > 0`).
    ClosedForm,
    /// Direct solve of the `(n+1)`-equation first-step system.
    LinearSolve,
}

/// `φ_l(λ) = E exp(-λ ξ_l)` where `ξ_l` is the time for the range to grow
/// when the walk starts at `l` of `{0, ..., n}`.
pub fn laplace_phi(problem: &RangeProblem, l: u64, point: &LaplacePoint, mode: PhiMode) -> Result<f64> {
    let n = problem.n();
    if l > n {
        return Err(Error::param("l", format!("start {l} outside 0..={n}")));
    }
    match mode {
        PhiMode::LinearSolve => Ok(solve_all(problem, point)?[l as usize]),
        PhiMode::ClosedForm => {
            if point.lambda == 0.0 {
                return Err(Error::param(
                    "lambda",
                    "closed forms are 0/0 at λ = 0; use the linear solve or the mean formulas",
                ));
            }
            if l == 0 {
                Ok(closed_form(problem, point, End::Min))
            } else if l == n {
                Ok(closed_form(problem, point, End::Max))
            } else {
                Err(Error::param("l", "closed forms exist only for l = 0 and l = n"))
            }
        }
    }
}

/// All of `φ_0..=φ_n` from the tridiagonal system.
pub(crate) fn solve_all(problem: &RangeProblem, point: &LaplacePoint) -> Result<Vec<f64>> {
    solve_discounted(problem, (-point.lambda).exp())
}

/// First-step system with per-step discount `s = e^{-λ}`. Also valid for
/// slightly negative `λ` (`s > 1`), where the exit time still has an
/// exponential moment.
pub(crate) fn solve_discounted(problem: &RangeProblem, s: f64) -> Result<Vec<f64>> {
    let n = problem.n() as usize;
    let (p, q) = (problem.bias().p(), problem.bias().q());
    let size = n + 1;
    let mut lower = vec![-0.5 * s; size - 1];
    let main = vec![1.0; size];
    let mut upper = vec![-0.5 * s; size - 1];
    let mut rhs = vec![0.0; size];
    upper[0] = -s * q;
    rhs[0] = s * (1.0 - q);
    lower[n - 1] = -s * (1.0 - p);
    rhs[n] = s * p;
    tridiag::solve(&lower, &main, &upper, &rhs)
}

enum End {
    Min,
    Max,
}

/// Closed forms multiplied through by `ζ^{-2n-2}` and by `e^{-2λ}`, so only
/// non-positive powers of `ζ` and `e^λ` appear.
fn closed_form(problem: &RangeProblem, point: &LaplacePoint, end: End) -> f64 {
    let n = problem.n() as f64;
    let (p, q) = (problem.bias().p(), problem.bias().q());
    let theta = point.theta;
    let s = (-point.lambda).exp();
    let w = (-theta).exp();
    // w^k - 1 for the exponents that appear
    let em = |k: f64| (-k * theta).exp_m1();
    // ζ²(1-ζ^{2n})      -> w^{2n} - 1
    let t2 = em(2.0 * n);
    // ζ³(1-ζ^{2n-2})    -> w^{2n-1} - w = w (w^{2n-2} - 1)
    let t3 = w * em(2.0 * n - 2.0);
    // ζ⁴(1-ζ^{2n-4})    -> w^{2n-2} - w² = w² (w^{2n-4} - 1)
    let t4 = if n >= 2.0 { w * w * em(2.0 * n - 4.0) } else { -em(2.0) };
    // ζ^{n+1}(1-ζ²)     -> w^{n+1} - w^{n-1} = w^{n-1} (w² - 1)
    let tm = (-(n - 1.0) * theta).exp() * em(2.0);

    let den = t2 - (1.0 + q - p) * s * t3 + q * (1.0 - p) * s * s * t4;
    let num = match end {
        End::Min => (1.0 - q) * s * t2 - (1.0 - p) * (1.0 - q) * s * s * t3 + p * q * s * s * tm,
        End::Max => p * s * t2 - p * q * s * s * t3 + (1.0 - p) * (1.0 - q) * s * s * tm,
    };
    num / den
}
