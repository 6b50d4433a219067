//! Forward-elimination / back-substitution for tridiagonal systems.

use crate::error::{Error, Result};

/// Solve `A x = rhs` where `A` has sub-diagonal `lower` (`lower[i]` is
/// `A[i+1][i]`), diagonal `main` and super-diagonal `upper` (`upper[i]` is
/// `A[i][i+1]`).
///
/// No pivoting; intended for the diagonally dominant systems that arise
/// from first-step analysis.
pub fn solve(lower: &[f64], main: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = main.len();
    if n == 0 || lower.len() + 1 != n || upper.len() + 1 != n || rhs.len() != n {
        return Err(Error::param("tridiagonal", "inconsistent band lengths"));
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = main[0];
    if pivot == 0.0 {
        return Err(Error::Singular("tridiagonal solve"));
    }
    if n > 1 {
        c[0] = upper[0] / pivot;
    }
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = main[i] - lower[i - 1] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Singular("tridiagonal solve"));
        }
        if i < n - 1 {
            c[i] = upper[i] / pivot;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}
