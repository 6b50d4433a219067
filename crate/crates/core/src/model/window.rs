use serde::{Deserialize, Serialize};

/// Largest window length representable by the bit encoding.
pub const MAX_WINDOW_BITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Increment {
    Down,
    Up,
}

impl Increment {
    pub fn value(self) -> i64 {
        match self {
            Increment::Down => -1,
            Increment::Up => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Increment::Down => Increment::Up,
            Increment::Up => Increment::Down,
        }
    }
}

/// Extremum status of the current position relative to the remembered past.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtremeClass {
    LocalMax,
    LocalMin,
    Neither,
    /// Only the empty history (time zero).
    Both,
}

impl ExtremeClass {
    pub fn flipped(self) -> Self {
        match self {
            ExtremeClass::LocalMax => ExtremeClass::LocalMin,
            ExtremeClass::LocalMin => ExtremeClass::LocalMax,
            other => other,
        }
    }
}

/// The last `len <= cap` increments, most recent first.
///
/// Bit `i` holds increment `i + 1` (`1` for `+1`), so the most recent step is
/// bit 0. For a full window the bit pattern is also the state index used by
/// the exact analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MemoryWindow {
    bits: u64,
    len: u8,
    cap: u8,
}

#[inline]
pub(crate) fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl MemoryWindow {
    /// Empty window with capacity `cap` (`1 <= cap <= 64`).
    pub fn empty(cap: usize) -> Self {
        assert!(
            (1..=MAX_WINDOW_BITS).contains(&cap),
            "window capacity must be in 1..=64"
        );
        MemoryWindow {
            bits: 0,
            len: 0,
            cap: cap as u8,
        }
    }

    /// A full window decoded from its state index.
    pub fn from_index(index: u64, cap: usize) -> Self {
        let mut w = Self::empty(cap);
        w.bits = index & low_mask(cap);
        w.len = cap as u8;
        w
    }

    /// Window from increments listed most recent first.
    pub fn from_increments(incs: &[Increment], cap: usize) -> Self {
        assert!(incs.len() <= cap, "more increments than window capacity");
        let mut w = Self::empty(cap);
        for &inc in incs.iter().rev() {
            w.push(inc);
        }
        w
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.cap
    }

    pub fn cap(&self) -> usize {
        self.cap as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Increment `i` (1-based, `1` is the most recent).
    pub fn get(&self, i: usize) -> Option<Increment> {
        if i == 0 || i > self.len() {
            return None;
        }
        Some(if self.bits >> (i - 1) & 1 == 1 {
            Increment::Up
        } else {
            Increment::Down
        })
    }

    pub fn increments(&self) -> impl Iterator<Item = Increment> + '_ {
        (1..=self.len()).map(|i| self.get(i).unwrap())
    }

    /// Partial sums `S(j)` for `j = 1..=len`.
    pub fn partial_sums(&self) -> Vec<i64> {
        self.increments()
            .scan(0i64, |s, inc| {
                *s += inc.value();
                Some(*s)
            })
            .collect()
    }

    /// Prepend a new most-recent increment, dropping the oldest when full.
    #[inline]
    pub fn push(&mut self, inc: Increment) {
        let b = matches!(inc, Increment::Up) as u64;
        self.bits = ((self.bits << 1) | b) & low_mask(self.cap());
        if self.len < self.cap {
            self.len += 1;
        }
    }

    pub fn pushed(mut self, inc: Increment) -> Self {
        self.push(inc);
        self
    }

    pub fn flipped(&self) -> Self {
        MemoryWindow {
            bits: !self.bits & low_mask(self.len()),
            ..*self
        }
    }

    /// Componentwise order: every increment of `self` is at least the
    /// corresponding increment of `other`. Windows of different lengths are
    /// incomparable.
    pub fn dominates(&self, other: &MemoryWindow) -> bool {
        self.len == other.len && other.bits & !self.bits & low_mask(self.len()) == 0
    }

    pub fn all_up(&self) -> bool {
        self.is_full() && self.bits == low_mask(self.len())
    }

    pub fn classify(&self) -> ExtremeClass {
        classify(self)
    }
}

/// `LocalMax` iff every partial sum is `>= 0`, `LocalMin` iff every partial
/// sum is `<= 0`, `Both` for the empty window.
pub fn classify(window: &MemoryWindow) -> ExtremeClass {
    if window.is_empty() {
        return ExtremeClass::Both;
    }
    let mut s = 0i64;
    let (mut lo, mut hi) = (0i64, 0i64);
    let mut bits = window.bits;
    for _ in 0..window.len() {
        s += if bits & 1 == 1 { 1 } else { -1 };
        bits >>= 1;
        lo = lo.min(s);
        hi = hi.max(s);
        if lo < 0 && hi > 0 {
            return ExtremeClass::Neither;
        }
    }
    if lo >= 0 {
        ExtremeClass::LocalMax
    } else {
        ExtremeClass::LocalMin
    }
}
