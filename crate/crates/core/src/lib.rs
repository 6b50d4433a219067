//! Nearest-neighbour random walks on the integers whose step law is perturbed
//! whenever the walker sits at the maximum or minimum of its last `L`
//! positions.
//!
//! The crate is split along the lines of the analysis:
//!
//! * [`model`] defines the process: parameters, the increment window,
//!   extremum classification and the single-step dynamics (finite memory,
//!   infinite memory and the cookie representation).
//! * [`finite`] is the exact analysis of the `2^L` window chain: stationary
//!   distribution, speed, recurrence class and the CLT variance.
//! * [`infinite`] holds the closed forms for the range process of the
//!   infinite-memory walk together with linear-system oracles.
//! * [`sim`] is the seeded Monte Carlo engine (trajectories, range events,
//!   couplings, cookie equivalence, CLT experiments).
//! * [`lab`] runs the parameter sweeps over `L`.

pub mod error;
pub mod finite;
pub mod infinite;
pub mod lab;
pub mod model;
pub mod sim;
pub mod stats;
pub mod tridiag;

pub use error::{Error, Result};
pub use model::{Bias, ExtremeClass, Increment, Memory, MemoryWindow, WalkParams};
