//! Process definition: parameters, increment windows, extremum
//! classification and single-step dynamics.

mod cookie;
mod params;
mod state;
mod window;

pub use cookie::{cookie_step_probability, CookieSite, CookieSiteState, OriginRule};
pub use params::{Bias, DriftSign, Memory, WalkParams};
pub use state::{FiniteState, InfiniteState, WalkState};
pub use window::{classify, ExtremeClass, Increment, MemoryWindow, MAX_WINDOW_BITS};

/// Probability of the next step being `+1` given the extremum class of the
/// current window.
#[inline]
pub fn step_up_probability(class: ExtremeClass, bias: &Bias) -> f64 {
    match class {
        ExtremeClass::LocalMax => bias.p(),
        ExtremeClass::LocalMin => bias.q(),
        ExtremeClass::Neither | ExtremeClass::Both => 0.5,
    }
}
