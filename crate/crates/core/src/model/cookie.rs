//! Cookie (excited walk) picture of the infinite-memory walk.
//!
//! Every site the walk pushes into as a new running maximum carries a stack
//! of `M ~ P(M = k) = p (1-p)^{k-1}` cookies: while at least two cookies
//! remain the walker eats one and steps left, eating the last one sends it
//! right, after which the site is cookie-free. New running minima carry
//! `P(M = k) = (1-q) q^{k-1}` cookies with the directions mirrored (at least
//! two left: step right; the last one: step left). Cookie-free sites are
//! fair.

use serde::{Deserialize, Serialize};

use super::{Bias, Increment, Memory, WalkParams};
use crate::error::{Error, Result};

/// Status of the site currently occupied by the walker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CookieSite {
    /// Running maximum whose stack is not yet exhausted.
    MaxStack,
    /// Running minimum whose stack is not yet exhausted.
    MinStack,
    Empty,
}

/// How the origin is stocked.
///
/// With `Empty` the origin never holds cookies. Then a return to `0` while
/// `0` is still the running maximum is fair, whereas the perturbed walk
/// steps up with probability `p` there, so the two path laws differ.
/// `Stacked` gives the origin a stack after the first (fair) step, drawn from
/// the law of the side it becomes extremal on; the laws then coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OriginRule {
    Empty,
    #[default]
    Stacked,
}

impl CookieSite {
    /// `P(M = k)` for the stack law of this site type (`k >= 1`).
    pub fn stack_pmf(self, k: u32, bias: &Bias) -> f64 {
        if k == 0 {
            return 0.0;
        }
        match self {
            CookieSite::MaxStack => bias.p() * (1.0 - bias.p()).powi(k as i32 - 1),
            CookieSite::MinStack => (1.0 - bias.q()) * bias.q().powi(k as i32 - 1),
            CookieSite::Empty => 0.0,
        }
    }

    /// `P(M > k)`.
    pub fn stack_tail(self, k: u32, bias: &Bias) -> f64 {
        match self {
            CookieSite::MaxStack => (1.0 - bias.p()).powi(k as i32),
            CookieSite::MinStack => bias.q().powi(k as i32),
            CookieSite::Empty => 0.0,
        }
    }

    /// Direction taken when `remaining >= 1` cookies are left before eating.
    pub fn eat(self, remaining: u64) -> Increment {
        debug_assert!(remaining >= 1);
        match (self, remaining == 1) {
            (CookieSite::MaxStack, false) | (CookieSite::MinStack, true) => Increment::Down,
            (CookieSite::MaxStack, true) | (CookieSite::MinStack, false) => Increment::Up,
            (CookieSite::Empty, _) => unreachable!("empty site has no cookies"),
        }
    }
}

/// Consumption record of one cookie site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CookieSiteState {
    pub site: i64,
    pub visits_while_extremal: u64,
}

/// Probability of stepping `+1` from a site, averaged over the unknown
/// remaining stack.
///
/// By memorylessness of the geometric law this does not depend on how many
/// visits the stack has already absorbed: at a max stack
/// `P(M = j+1 | M > j) = p`, at a min stack `P(M > j+1 | M > j) = q`.
pub fn cookie_step_probability(site: CookieSite, params: &WalkParams) -> Result<f64> {
    if params.memory != Memory::Infinite {
        return Err(Error::WrongMemory { expected: "infinite" });
    }
    Ok(match site {
        CookieSite::MaxStack => params.p(),
        CookieSite::MinStack => params.q(),
        CookieSite::Empty => 0.5,
    })
}
