//! Time grids, sample paths, ensembles and the exponentially weighted
//! pathwise integrals the other modules build on.

mod ensemble;
mod grid;
mod hurst;
mod integral;
mod path;

pub use ensemble::{Ensemble, PathGenerator, PathRng, StreamSeed};
pub use grid::{GridDescription, GridKind, TimeGrid, MAX_GRID_POINTS};
pub use integral::{
    cumulative_exp_integral, exp_weighted_integral, exp_weighted_integral_with, exprel,
    improper_exp_integral, improper_exp_integral_with, DoublingOptions, ImproperIntegral,
    NoiseHistory, Quadrature,
};
pub use hurst::HurstParam;
pub use path::SamplePath;
