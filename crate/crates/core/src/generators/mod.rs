//! Reference processes: Brownian motion, fractional Brownian motion, the
//! noise of the Lamperti-transformed Brownian motion, fractional
//! Ornstein–Uhlenbeck processes of the first and second kind, and the
//! heavy-tailed counterexample noise.

mod brownian;
mod fbm;
mod gaussian;
mod langevin_driven;
mod pareto;
mod spec;

pub use brownian::{brownian, Brownian};
pub use fbm::{
    fbm, fbm_covariance, fgn_autocovariance, lamperti_fbm_autocovariance, Fbm, FbmMethod, FbmSpec,
    StationaryLampertiFbm,
};
pub use gaussian::{CholeskySampler, CirculantEmbedding, CHOLESKY_MAX_POINTS};
pub use langevin_driven::{
    bm_lamperti_noise, bm_lamperti_pair, fou_first_kind, fou_first_kind_generator, fou_second_kind,
    fou_second_kind_generator, ornstein_uhlenbeck, second_kind_integral_representation,
    second_kind_time_change, time_changed_fbm, BmLampertiNoise, SecondKindNoise, StationaryLangevin,
};
pub use pareto::{pareto_counterexample, ParetoNoise, ParetoSpec};
pub use spec::{Generated, ProcessSpec};
