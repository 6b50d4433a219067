use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step-up probabilities at the local maximum (`p`) and local minimum (`q`).
///
/// Both lie strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bias {
    p: f64,
    q: f64,
}

impl Bias {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        check_open_unit("p", p)?;
        check_open_unit("q", q)?;
        Ok(Bias { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn unperturbed() -> Self {
        Bias { p: 0.5, q: 0.5 }
    }

    /// Law of the negated walk `-X`: `(p, q) -> (1 - q, 1 - p)`.
    pub fn mirrored(&self) -> Self {
        Bias {
            p: 1.0 - self.q,
            q: 1.0 - self.p,
        }
    }

    /// `1 - p - q + 2pq = (1-p)(1-q) + pq`, strictly positive on the open square.
    pub fn renewal_constant(&self) -> f64 {
        let c = (1.0 - self.p) * (1.0 - self.q) + self.p * self.q;
        debug_assert!(c > 0.0);
        c
    }

    /// Sign of `p + q - 1`, decided on the decimal form of the inputs.
    ///
    /// `0.7 + 0.3` is not exactly `1.0` in binary floating point, so the
    /// comparison is done on the shortest round-trip decimal representation
    /// of both values (the digits a user typed). Values that need more than
    /// twenty decimals fall back to a floating comparison.
    pub fn drift_sign(&self) -> DriftSign {
        let ord = match (decimal_units(self.p), decimal_units(self.q)) {
            (Some(a), Some(b)) => (a + b).cmp(&DECIMAL_ONE),
            _ => (self.p + self.q).partial_cmp(&1.0).unwrap_or(Ordering::Equal),
        };
        match ord {
            Ordering::Less => DriftSign::Negative,
            Ordering::Equal => DriftSign::Zero,
            Ordering::Greater => DriftSign::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DriftSign {
    Negative,
    Zero,
    Positive,
}

const DECIMAL_PLACES: usize = 20;
const DECIMAL_ONE: u128 = 100_000_000_000_000_000_000;

/// `x * 10^20` as an exact integer, if `x` in `[0, 1]` has at most twenty
/// decimals in its shortest round-trip form.
fn decimal_units(x: f64) -> Option<u128> {
    let text = format!("{x}");
    let (int_part, frac) = text.split_once('.').unwrap_or((text.as_str(), ""));
    if frac.len() > DECIMAL_PLACES {
        return None;
    }
    let int: u128 = int_part.parse().ok()?;
    let frac_units: u128 = if frac.is_empty() {
        0
    } else {
        frac.parse::<u128>().ok()? * 10u128.pow((DECIMAL_PLACES - frac.len()) as u32)
    };
    Some(int * DECIMAL_ONE + frac_units)
}

fn check_open_unit(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::param(
            name,
            format!("must lie in the open interval (0,1), got {x}"),
        ))
    }
}

/// Memory of the walk: the last `L` positions or the whole history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Memory {
    Finite(usize),
    Infinite,
}

impl Memory {
    pub fn finite(self) -> Option<usize> {
        match self {
            Memory::Finite(l) => Some(l),
            Memory::Infinite => None,
        }
    }
}

impl fmt::Display for Memory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Memory::Finite(l) => write!(f, "{l}"),
            Memory::Infinite => f.write_str("inf"),
        }
    }
}

/// Full parameterization of the process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkParams {
    pub bias: Bias,
    pub memory: Memory,
}

impl WalkParams {
    pub fn new(p: f64, q: f64, memory: Memory) -> Result<Self> {
        if let Memory::Finite(l) = memory {
            if l == 0 {
                return Err(Error::param("L", "window length must be at least 1"));
            }
            if l > super::MAX_WINDOW_BITS {
                return Err(Error::param(
                    "L",
                    format!("window length must be at most {}", super::MAX_WINDOW_BITS),
                ));
            }
        }
        Ok(WalkParams {
            bias: Bias::new(p, q)?,
            memory,
        })
    }

    pub fn finite(p: f64, q: f64, l: usize) -> Result<Self> {
        Self::new(p, q, Memory::Finite(l))
    }

    pub fn infinite(p: f64, q: f64) -> Result<Self> {
        Self::new(p, q, Memory::Infinite)
    }

    pub fn p(&self) -> f64 {
        self.bias.p()
    }

    pub fn q(&self) -> f64 {
        self.bias.q()
    }

    pub fn window_len(&self) -> Result<usize> {
        self.memory.finite().ok_or(Error::WrongMemory { expected: "finite" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_boundary_probabilities() {
        for bad in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(Bias::new(bad, 0.5).is_err());
            assert!(Bias::new(0.5, bad).is_err());
        }
        assert!(WalkParams::finite(0.5, 0.5, 0).is_err());
        assert!(WalkParams::finite(0.5, 0.5, 65).is_err());
        assert!(WalkParams::finite(0.5, 0.5, 64).is_ok());
    }

    #[test]
    fn drift_sign_is_exact_on_decimal_inputs() {
        let grid = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
        for (i, &p) in grid.iter().enumerate() {
            for (j, &q) in grid.iter().enumerate() {
                let expect = match (i + j + 2).cmp(&10) {
                    Ordering::Less => DriftSign::Negative,
                    Ordering::Equal => DriftSign::Zero,
                    Ordering::Greater => DriftSign::Positive,
                };
                assert_eq!(Bias::new(p, q).unwrap().drift_sign(), expect, "p={p} q={q}");
            }
        }
        assert_eq!(Bias::new(0.95, 0.05).unwrap().drift_sign(), DriftSign::Zero);
        assert_eq!(Bias::new(0.15, 0.95).unwrap().drift_sign(), DriftSign::Positive);
        assert_eq!(Bias::new(0.5, 0.5 - 1e-12).unwrap().drift_sign(), DriftSign::Negative);
    }

    #[test]
    fn mirror_is_an_involution() {
        let b = Bias::new(0.8, 0.3).unwrap();
        let m = b.mirrored();
        assert!((m.p() - 0.7).abs() < 1e-15 && (m.q() - 0.2).abs() < 1e-15);
        let back = m.mirrored();
        assert!((back.p() - 0.8).abs() < 1e-15 && (back.q() - 0.3).abs() < 1e-15);
    }
}
