use serde::{Deserialize, Serialize};

use super::{step_up_probability, Bias, ExtremeClass, Increment, MemoryWindow};

/// Common surface of the finite- and infinite-memory walk states.
///
/// `advance` is a pure function of the state and one uniform draw: the walk
/// steps `+1` iff `u < P(up)`. Sharing draws between states is how the
/// couplings are built.
pub trait WalkState: Copy {
    fn position(&self) -> i64;
    fn class(&self) -> ExtremeClass;
    fn with_step(&self, inc: Increment) -> Self;

    #[inline]
    fn step_for(&self, u: f64, bias: &Bias) -> Increment {
        if u < step_up_probability(self.class(), bias) {
            Increment::Up
        } else {
            Increment::Down
        }
    }

    #[inline]
    fn advance(&self, u: f64, bias: &Bias) -> Self {
        self.with_step(self.step_for(u, bias))
    }
}

/// Walk with memory `L`: position plus the last `L ∧ k` increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteState {
    pub position: i64,
    pub window: MemoryWindow,
}

impl FiniteState {
    pub fn start(l: usize) -> Self {
        FiniteState {
            position: 0,
            window: MemoryWindow::empty(l),
        }
    }
}

impl WalkState for FiniteState {
    fn position(&self) -> i64 {
        self.position
    }

    fn class(&self) -> ExtremeClass {
        self.window.classify()
    }

    fn with_step(&self, inc: Increment) -> Self {
        FiniteState {
            position: self.position + inc.value(),
            window: self.window.pushed(inc),
        }
    }
}

/// Walk perturbed at its global extrema. Only `(position, max, min)` matter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfiniteState {
    pub position: i64,
    pub global_max: i64,
    pub global_min: i64,
    pub step_count: u64,
}

impl InfiniteState {
    pub fn start() -> Self {
        InfiniteState {
            position: 0,
            global_max: 0,
            global_min: 0,
            step_count: 0,
        }
    }

    pub fn range(&self) -> u64 {
        (self.global_max - self.global_min) as u64
    }
}

impl Default for InfiniteState {
    fn default() -> Self {
        Self::start()
    }
}

impl WalkState for InfiniteState {
    fn position(&self) -> i64 {
        self.position
    }

    #[inline]
    fn class(&self) -> ExtremeClass {
        if self.step_count == 0 {
            ExtremeClass::Both
        } else if self.position == self.global_max {
            ExtremeClass::LocalMax
        } else if self.position == self.global_min {
            ExtremeClass::LocalMin
        } else {
            ExtremeClass::Neither
        }
    }

    #[inline]
    fn with_step(&self, inc: Increment) -> Self {
        let position = self.position + inc.value();
        InfiniteState {
            position,
            global_max: self.global_max.max(position),
            global_min: self.global_min.min(position),
            step_count: self.step_count + 1,
        }
    }
}
