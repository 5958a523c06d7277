//! Stationary processes, their Langevin noises and the self-similar
//! processes obtained from them by the Lamperti transform.
//!
//! * [`path_core`]: grids, sample paths, ensembles and the pathwise
//!   integrals `∫ e^{Hu} dX_u`.
//! * [`lamperti`]: the transform `t^H U_{log t}` and its inverse.
//! * [`langevin`]: solving `dU = −HU dt + dG` and recovering `G` from `U`.
//! * [`discrete_ar`]: the integer-time analogue and ARMA inputs.
//! * [`generators`]: fBm, OU and fractional OU processes, and a noise with no
//!   stationary solution.
//! * [`stat_tests`]: KS-based checks of stationarity, self-similarity and
//!   noise-class membership.
//! * [`io`]: CSV and manifest files.

pub mod discrete_ar;
pub mod error;
pub mod generators;
pub mod io;
pub mod lamperti;
pub mod langevin;
pub mod path_core;
pub mod stat_tests;

pub use error::{Error, Result};
