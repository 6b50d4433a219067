use std::collections::VecDeque;
use std::sync::Arc;

use crate::model::{
    step_up_probability, Bias, ExtremeClass, Increment, InfiniteState, Memory, MemoryWindow, WalkParams, WalkState,
};

/// Windows up to this length are classified through a precomputed table.
pub const TABLE_MAX_L: usize = 16;

/// Incremental walker: the hot loop of every simulation.
pub trait Stepper {
    fn position(&self) -> i64;
    fn class(&self) -> ExtremeClass;
    fn bias(&self) -> &Bias;
    fn apply(&mut self, inc: Increment);

    #[inline]
    fn up_probability(&self) -> f64 {
        step_up_probability(self.class(), self.bias())
    }

    /// `+1` iff `u < P(up)`.
    #[inline]
    fn step(&mut self, u: f64) -> Increment {
        let inc = if u < self.up_probability() {
            Increment::Up
        } else {
            Increment::Down
        };
        self.apply(inc);
        inc
    }
}

/// Finite memory with the `P(up)` of every full window tabulated.
#[derive(Debug, Clone)]
pub struct TableWalker {
    bias: Bias,
    position: i64,
    window: MemoryWindow,
    table: Arc<[f64]>,
}

impl TableWalker {
    pub fn table(params: &WalkParams) -> Arc<[f64]> {
        let l = params.window_len().expect("finite memory");
        assert!(l <= TABLE_MAX_L, "table walker is limited to L <= {TABLE_MAX_L}");
        (0..1u64 << l)
            .map(|s| step_up_probability(MemoryWindow::from_index(s, l).classify(), &params.bias))
            .collect()
    }

    pub fn new(params: &WalkParams, table: Arc<[f64]>) -> Self {
        let l = params.window_len().expect("finite memory");
        assert_eq!(table.len(), 1 << l);
        TableWalker {
            bias: params.bias,
            position: 0,
            window: MemoryWindow::empty(l),
            table,
        }
    }

    pub fn window(&self) -> MemoryWindow {
        self.window
    }
}

impl Stepper for TableWalker {
    fn position(&self) -> i64 {
        self.position
    }

    fn class(&self) -> ExtremeClass {
        self.window.classify()
    }

    fn bias(&self) -> &Bias {
        &self.bias
    }

    #[inline]
    fn up_probability(&self) -> f64 {
        if self.window.is_full() {
            self.table[self.window.bits() as usize]
        } else {
            step_up_probability(self.window.classify(), &self.bias)
        }
    }

    #[inline]
    fn apply(&mut self, inc: Increment) {
        self.position += inc.value();
        self.window.push(inc);
    }
}

/// Finite memory of any length via sliding maximum and minimum of the last
/// `L` positions (monotone deques, amortized O(1) per step).
#[derive(Debug, Clone)]
pub struct DequeWalker {
    bias: Bias,
    l: u64,
    time: u64,
    position: i64,
    // (time, position), positions decreasing from the front
    maxima: VecDeque<(u64, i64)>,
    // (time, position), positions increasing from the front
    minima: VecDeque<(u64, i64)>,
}

impl DequeWalker {
    pub fn new(params: &WalkParams) -> Self {
        let l = params.window_len().expect("finite memory");
        DequeWalker {
            bias: params.bias,
            l: l as u64,
            time: 0,
            position: 0,
            maxima: VecDeque::with_capacity(l + 1),
            minima: VecDeque::with_capacity(l + 1),
        }
    }
}

impl Stepper for DequeWalker {
    fn position(&self) -> i64 {
        self.position
    }

    #[inline]
    fn class(&self) -> ExtremeClass {
        match (self.maxima.front(), self.minima.front()) {
            (Some(&(_, hi)), Some(&(_, lo))) => {
                if self.position >= hi {
                    ExtremeClass::LocalMax
                } else if self.position <= lo {
                    ExtremeClass::LocalMin
                } else {
                    ExtremeClass::Neither
                }
            }
            _ => ExtremeClass::Both,
        }
    }

    fn bias(&self) -> &Bias {
        &self.bias
    }

    #[inline]
    fn apply(&mut self, inc: Increment) {
        let (t, x) = (self.time, self.position);
        while self.maxima.back().is_some_and(|&(_, y)| y <= x) {
            self.maxima.pop_back();
        }
        self.maxima.push_back((t, x));
        while self.minima.back().is_some_and(|&(_, y)| y >= x) {
            self.minima.pop_back();
        }
        self.minima.push_back((t, x));
        self.time += 1;
        self.position += inc.value();
        if self.time > self.l {
            let oldest = self.time - self.l;
            while self.maxima.front().is_some_and(|&(s, _)| s < oldest) {
                self.maxima.pop_front();
            }
            while self.minima.front().is_some_and(|&(s, _)| s < oldest) {
                self.minima.pop_front();
            }
        }
    }
}

/// Infinite memory: only position and running extrema are kept.
#[derive(Debug, Clone, Copy)]
pub struct InfiniteWalker {
    bias: Bias,
    pub state: InfiniteState,
}

impl InfiniteWalker {
    pub fn new(bias: Bias) -> Self {
        InfiniteWalker {
            bias,
            state: InfiniteState::start(),
        }
    }
}

impl Stepper for InfiniteWalker {
    fn position(&self) -> i64 {
        self.state.position
    }

    #[inline]
    fn class(&self) -> ExtremeClass {
        self.state.class()
    }

    fn bias(&self) -> &Bias {
        &self.bias
    }

    #[inline]
    fn apply(&mut self, inc: Increment) {
        self.state = self.state.with_step(inc);
    }
}

/// Walker for arbitrary parameters; the table is built once and shared by
/// [`Walker::spawn`].
#[derive(Debug, Clone)]
pub enum Walker {
    Table(TableWalker),
    Deque(DequeWalker),
    Infinite(InfiniteWalker),
}

impl Walker {
    pub fn new(params: &WalkParams) -> Self {
        match params.memory {
            Memory::Infinite => Walker::Infinite(InfiniteWalker::new(params.bias)),
            Memory::Finite(l) if l <= TABLE_MAX_L => {
                Walker::Table(TableWalker::new(params, TableWalker::table(params)))
            }
            Memory::Finite(_) => Walker::Deque(DequeWalker::new(params)),
        }
    }

    /// A fresh walker at the origin with the same parameters.
    pub fn spawn(&self) -> Self {
        match self {
            Walker::Table(w) => Walker::Table(TableWalker {
                position: 0,
                window: MemoryWindow::empty(w.window.cap()),
                ..w.clone()
            }),
            Walker::Deque(w) => Walker::Deque(DequeWalker::new(&WalkParams {
                bias: w.bias,
                memory: Memory::Finite(w.l as usize),
            })),
            Walker::Infinite(w) => Walker::Infinite(InfiniteWalker::new(w.bias)),
        }
    }
}

impl Stepper for Walker {
    fn position(&self) -> i64 {
        match self {
            Walker::Table(w) => w.position(),
            Walker::Deque(w) => w.position(),
            Walker::Infinite(w) => w.position(),
        }
    }

    fn class(&self) -> ExtremeClass {
        match self {
            Walker::Table(w) => w.class(),
            Walker::Deque(w) => w.class(),
            Walker::Infinite(w) => w.class(),
        }
    }

    fn bias(&self) -> &Bias {
        match self {
            Walker::Table(w) => w.bias(),
            Walker::Deque(w) => w.bias(),
            Walker::Infinite(w) => w.bias(),
        }
    }

    #[inline]
    fn up_probability(&self) -> f64 {
        match self {
            Walker::Table(w) => w.up_probability(),
            Walker::Deque(w) => w.up_probability(),
            Walker::Infinite(w) => w.up_probability(),
        }
    }

    #[inline]
    fn apply(&mut self, inc: Increment) {
        match self {
            Walker::Table(w) => w.apply(inc),
            Walker::Deque(w) => w.apply(inc),
            Walker::Infinite(w) => w.apply(inc),
        }
    }
}
