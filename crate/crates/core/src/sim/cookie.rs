use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;

use super::uniform;
use crate::error::{Error, Result};
use crate::model::{Bias, CookieSite, Increment, InfiniteState, Memory, OriginRule, WalkParams, WalkState};

/// Largest horizon for the exhaustive path comparison.
pub const MAX_COOKIE_HORIZON: u32 = 10;

/// Probability of `path` under the perturbed step law with infinite memory.
pub fn perturbed_path_probability(bias: &Bias, path: &[Increment]) -> f64 {
    let mut st = InfiniteState::start();
    let mut prob = 1.0;
    for &inc in path {
        let up = crate::model::step_up_probability(st.class(), bias);
        prob *= match inc {
            Increment::Up => up,
            Increment::Down => 1.0 - up,
        };
        st = st.with_step(inc);
    }
    prob
}

struct SiteLog {
    site: CookieSite,
    /// Directions taken on successive departures after the stack arrived.
    departures: Vec<Increment>,
}

/// Probability that one stack reproduces the observed departures, summed over
/// `M = 1..=r` and lumping `M > r` (all departures are then forced).
fn site_factor(bias: &Bias, log: &SiteLog) -> f64 {
    let r = log.departures.len() as u64;
    let consistent = |m: u64| -> f64 {
        log.departures
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let i = i as u64 + 1;
                if i <= m {
                    if log.site.eat(m - i + 1) == d {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    0.5
                }
            })
            .product()
    };
    let exact: f64 = (1..=r)
        .map(|m| log.site.stack_pmf(m as u32, bias) * consistent(m))
        .sum();
    exact + log.site.stack_tail(r as u32, bias) * consistent(r + 1)
}

/// Probability of `path` under the cookie law, integrating the geometric
/// stack sizes exactly and independently per site.
pub fn cookie_path_probability(bias: &Bias, path: &[Increment], origin: OriginRule) -> f64 {
    let mut sites: BTreeMap<i64, SiteLog> = BTreeMap::new();
    let mut fair_steps = 0i32;
    let (mut x, mut hi, mut lo) = (0i64, 0i64, 0i64);
    for (k, &inc) in path.iter().enumerate() {
        match sites.get_mut(&x) {
            Some(log) => log.departures.push(inc),
            None => fair_steps += 1,
        }
        x += inc.value();
        let site = if x > hi {
            hi = x;
            Some(CookieSite::MaxStack)
        } else if x < lo {
            lo = x;
            Some(CookieSite::MinStack)
        } else {
            None
        };
        if let Some(site) = site {
            sites.insert(
                x,
                SiteLog {
                    site,
                    departures: Vec::new(),
                },
            );
        }
        if k == 0 && origin == OriginRule::Stacked {
            // the origin is now the extremum opposite to the first step
            let site = match inc {
                Increment::Up => CookieSite::MinStack,
                Increment::Down => CookieSite::MaxStack,
            };
            sites.insert(
                0,
                SiteLog {
                    site,
                    departures: Vec::new(),
                },
            );
        }
    }
    let stacks: f64 = sites.values().map(|log| site_factor(bias, log)).product();
    0.5f64.powi(fair_steps) * stacks
}

fn path_of(code: u32, horizon: u32) -> Vec<Increment> {
    (0..horizon)
        .map(|i| {
            if code >> i & 1 == 1 {
                Increment::Up
            } else {
                Increment::Down
            }
        })
        .collect()
}

/// Largest `|P_perturbed(path) - P_cookie(path)|` over all `2^T` paths.
pub fn cookie_equivalence(params: &WalkParams, horizon: u32, origin: OriginRule) -> Result<f64> {
    if params.memory != Memory::Infinite {
        return Err(Error::WrongMemory { expected: "infinite" });
    }
    if horizon == 0 || horizon > MAX_COOKIE_HORIZON {
        return Err(Error::param(
            "T",
            format!("horizon must be in 1..={MAX_COOKIE_HORIZON} for exhaustive enumeration"),
        ));
    }
    Ok((0..1u32 << horizon)
        .map(|code| {
            let path = path_of(code, horizon);
            (perturbed_path_probability(&params.bias, &path) - cookie_path_probability(&params.bias, &path, origin))
                .abs()
        })
        .fold(0.0, f64::max))
}

/// Cookie walk with explicitly sampled stacks.
///
/// Only the current maximum and minimum can hold cookies (a stack is
/// exhausted before the walker passes its site), so two counters suffice.
#[derive(Debug, Clone)]
pub struct CookieWalk {
    bias: Bias,
    origin: OriginRule,
    pub position: i64,
    pub max: i64,
    pub min: i64,
    pub steps: u64,
    max_stack: u64,
    min_stack: u64,
}

/// `1 + floor(ln U / ln(1 - success))`, i.e. `P(M = k) = s (1-s)^{k-1}`.
fn geometric(rng: &mut ChaCha8Rng, success: f64) -> u64 {
    let u = 1.0 - uniform(rng);
    1 + (u.ln() / (1.0 - success).ln()).floor() as u64
}

impl CookieWalk {
    pub fn new(bias: Bias, origin: OriginRule) -> Self {
        CookieWalk {
            bias,
            origin,
            position: 0,
            max: 0,
            min: 0,
            steps: 0,
            max_stack: 0,
            min_stack: 0,
        }
    }

    fn draw_stack(&self, site: CookieSite, rng: &mut ChaCha8Rng) -> u64 {
        match site {
            CookieSite::MaxStack => geometric(rng, self.bias.p()),
            CookieSite::MinStack => geometric(rng, 1.0 - self.bias.q()),
            CookieSite::Empty => 0,
        }
    }

    pub fn step(&mut self, rng: &mut ChaCha8Rng) -> Increment {
        let inc = if self.position == self.max && self.max_stack > 0 {
            let inc = CookieSite::MaxStack.eat(self.max_stack);
            self.max_stack -= 1;
            inc
        } else if self.position == self.min && self.min_stack > 0 {
            let inc = CookieSite::MinStack.eat(self.min_stack);
            self.min_stack -= 1;
            inc
        } else if uniform(rng) < 0.5 {
            Increment::Up
        } else {
            Increment::Down
        };
        self.position += inc.value();
        if self.position > self.max {
            self.max = self.position;
            self.max_stack = self.draw_stack(CookieSite::MaxStack, rng);
        } else if self.position < self.min {
            self.min = self.position;
            self.min_stack = self.draw_stack(CookieSite::MinStack, rng);
        }
        if self.steps == 0 && self.origin == OriginRule::Stacked {
            match inc {
                Increment::Up => self.min_stack = self.draw_stack(CookieSite::MinStack, rng),
                Increment::Down => self.max_stack = self.draw_stack(CookieSite::MaxStack, rng),
            }
        }
        self.steps += 1;
        inc
    }
}
