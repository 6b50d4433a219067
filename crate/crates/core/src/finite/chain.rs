use super::ExactConfig;
use crate::error::{Error, Result};
use crate::model::{step_up_probability, Bias, ExtremeClass, MemoryWindow, WalkParams};

/// The window chain: from window `η` the next window is `(η*, η¹..η^{L-1})`
/// with `η* = +1` with probability `P(up | class(η))`.
///
/// States are indexed by the window's bit pattern (bit 0 = most recent
/// increment, `1` = up), so the up-successor of `s` is `(s << 1 | 1) & mask`.
#[derive(Debug, Clone)]
pub struct TransitionOperator {
    l: usize,
    bias: Bias,
    classes: Vec<ExtremeClass>,
}

pub fn build_chain(params: &WalkParams, config: &ExactConfig) -> Result<TransitionOperator> {
    let l = params.window_len()?;
    if l > config.max_window {
        return Err(Error::Capacity {
            requested: l,
            cap: config.max_window,
        });
    }
    let classes = (0..1u64 << l)
        .map(|s| MemoryWindow::from_index(s, l).classify())
        .collect();
    Ok(TransitionOperator {
        l,
        bias: params.bias,
        classes,
    })
}

impl TransitionOperator {
    pub fn window_len(&self) -> usize {
        self.l
    }

    pub fn bias(&self) -> &Bias {
        &self.bias
    }

    pub fn num_states(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn class(&self, state: usize) -> ExtremeClass {
        self.classes[state]
    }

    #[inline]
    pub fn up_probability(&self, state: usize) -> f64 {
        step_up_probability(self.classes[state], &self.bias)
    }

    #[inline]
    fn mask(&self) -> usize {
        (1usize << self.l) - 1
    }

    /// `[(up successor, prob), (down successor, prob)]`
    #[inline]
    pub fn row(&self, state: usize) -> [(usize, f64); 2] {
        let up = self.up_probability(state);
        let shifted = (state << 1) & self.mask();
        [(shifted | 1, up), (shifted, 1.0 - up)]
    }

    /// States `s` with `s -> target` possible.
    #[inline]
    pub fn predecessors(&self, target: usize) -> [usize; 2] {
        let base = target >> 1;
        [base, base | 1 << (self.l - 1)]
    }

    /// `P(from -> to)` for a pair where the transition is possible.
    #[inline]
    pub(crate) fn edge(&self, from: usize, to: usize) -> f64 {
        let up = self.up_probability(from);
        if to & 1 == 1 {
            up
        } else {
            1.0 - up
        }
    }

    /// `(P v)(s) = Σ_t P(s, t) v(t)`
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.num_states());
        for (s, o) in out.iter_mut().enumerate() {
            let [(a, pa), (b, pb)] = self.row(s);
            *o = pa * v[a] + pb * v[b];
        }
    }

    /// `(π P)(t) = Σ_s π(s) P(s, t)`, computed per target from its two
    /// predecessors in a fixed order.
    pub fn apply_left(&self, pi: &[f64], out: &mut [f64]) {
        debug_assert_eq!(pi.len(), self.num_states());
        for (t, o) in out.iter_mut().enumerate() {
            let [a, b] = self.predecessors(t);
            *o = pi[a] * self.edge(a, t) + pi[b] * self.edge(b, t);
        }
    }

    /// Observable `f(η) = η¹`, the next increment's value.
    pub fn first_increment(&self) -> Vec<f64> {
        (0..self.num_states())
            .map(|s| if s & 1 == 1 { 1.0 } else { -1.0 })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Increment::{Down as D, Up as U};

    fn op(p: f64, q: f64, l: usize) -> TransitionOperator {
        build_chain(&WalkParams::finite(p, q, l).unwrap(), &ExactConfig::default()).unwrap()
    }

    #[test]
    fn two_state_chain() {
        let c = op(0.6, 0.5, 1);
        // state 1 = (+1), state 0 = (-1)
        assert_eq!(c.row(1), [(1, 0.6), (0, 0.4)]);
        assert_eq!(c.row(0), [(1, 0.5), (0, 0.5)]);
    }

    #[test]
    fn unperturbed_rows_are_fair() {
        let c = op(0.5, 0.5, 2);
        for s in 0..4 {
            for (_, pr) in c.row(s) {
                assert_eq!(pr, 0.5);
            }
        }
    }

    #[test]
    fn three_window_classes() {
        let c = op(0.7, 0.2, 3);
        let maxes: Vec<_> = (0..8).filter(|&s| c.class(s) == ExtremeClass::LocalMax).collect();
        let expect: Vec<usize> = [[U, U, U], [U, U, D], [U, D, U]]
            .iter()
            .map(|w| MemoryWindow::from_increments(w, 3).bits() as usize)
            .collect();
        let mut expect = expect;
        expect.sort();
        assert_eq!(maxes, expect);
        assert_eq!((0..8).filter(|&s| c.class(s) == ExtremeClass::LocalMin).count(), 3);
    }

    #[test]
    fn rows_are_stochastic_and_predecessors_consistent() {
        let c = op(0.83, 0.27, 7);
        for s in 0..c.num_states() {
            let row = c.row(s);
            assert!((row[0].1 + row[1].1 - 1.0).abs() < 1e-15);
            for (t, _) in row {
                assert!(c.predecessors(t).contains(&s));
            }
            let mut w = MemoryWindow::from_index(s as u64, 7);
            w.push(U);
            assert_eq!(w.bits() as usize, row[0].0);
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let params = WalkParams::finite(0.6, 0.4, 9).unwrap();
        let cfg = ExactConfig {
            max_window: 8,
            ..ExactConfig::default()
        };
        assert_eq!(
            build_chain(&params, &cfg).unwrap_err(),
            Error::Capacity { requested: 9, cap: 8 }
        );
        assert!(build_chain(&WalkParams::infinite(0.6, 0.4).unwrap(), &cfg).is_err());
    }
}
