//! Parameter sweeps over the window length and the data behind the figures.
//!
//! Everything here is a probe of conjectured large-`L` behaviour: values are
//! reported, not judged.

mod figures;
mod scaling;
pub mod svg;
mod sweep;

pub use figures::{fig1, fig2, fig3, Fig2, FigureSeries, TrajectorySpec, FIG1_PAIRS, FIG3_PAIRS};
pub use scaling::{nonnegative_window_fraction, pi_max_scaling, srw_max_probability, PiMaxScalingRow, SrwMaxRow};
pub use sweep::{
    fit_speed_scaling, scaling_factor, speed_sweep, McBudget, ModePolicy, RowMode, ScalingFit, SweepRow, SweepSpec,
};
