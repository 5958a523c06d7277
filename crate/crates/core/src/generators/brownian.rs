use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::path_core::{PathGenerator, PathRng, SamplePath, StreamSeed, TimeGrid};

/// Two-sided standard Brownian motion with `W_0 = 0` on an arbitrary grid.
///
/// Time zero need not be a grid point: the walk starts from a virtual node at
/// `0` and moves outwards in both directions, forward times first.
#[derive(Debug, Clone)]
pub struct Brownian {
    grid: Arc<TimeGrid>,
}

impl Brownian {
    pub fn new(grid: Arc<TimeGrid>) -> Self {
        Self { grid }
    }
}

impl PathGenerator for Brownian {
    fn output_grid(&self) -> &Arc<TimeGrid> {
        &self.grid
    }

    fn sample_with(&self, rng: &mut PathRng) -> Result<SamplePath> {
        let p = self.grid.points();
        let values = brownian_values(p, &mut |dt: f64| dt.sqrt() * rng.sample::<f64, _>(StandardNormal));
        SamplePath::new(self.grid.clone(), values)
    }
}

/// Random walk with increments `step(|Δt|)`, pinned to zero at time zero.
pub(crate) fn brownian_values(p: &[f64], step: &mut impl FnMut(f64) -> f64) -> Vec<f64> {
    let split = p.partition_point(|&t| t < 0.0);
    let mut w = vec![0.0; p.len()];
    let mut prev = (0.0, 0.0);
    for k in split..p.len() {
        let dt = p[k] - prev.0;
        let v = if dt > 0.0 { prev.1 + step(dt) } else { prev.1 };
        w[k] = v;
        prev = (p[k], v);
    }
    prev = (0.0, 0.0);
    for k in (0..split).rev() {
        let v = prev.1 + step(prev.0 - p[k]);
        w[k] = v;
        prev = (p[k], v);
    }
    w
}

/// One Brownian path on `grid`.
pub fn brownian(grid: Arc<TimeGrid>, seed: StreamSeed) -> Result<SamplePath> {
    Brownian::new(grid).sample(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path_core::Ensemble;
    use crate::stat_tests::{covariance, sample_variance};

    #[test]
    fn anchored_at_zero() {
        let g = Arc::new(TimeGrid::uniform(-1.0, 1.0, 0.25).unwrap());
        let w = brownian(g, StreamSeed::new(1, 0)).unwrap();
        assert_eq!(w.at(0.0).unwrap(), 0.0);
    }

    #[test]
    fn deterministic_under_seed() {
        let g = Arc::new(TimeGrid::uniform(0.0, 1.0, 0.01).unwrap());
        let a = brownian(g.clone(), StreamSeed::new(9, 3)).unwrap();
        let b = brownian(g, StreamSeed::new(9, 3)).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn variance_and_independent_increments() {
        let g = Arc::new(TimeGrid::explicit(vec![-1.0, 0.5, 1.0, 2.0]).unwrap());
        let ens = Ensemble::generate(&Brownian::new(g), 5, 4000).unwrap();
        let w1 = ens.column(1.0).unwrap();
        assert!((sample_variance(&w1) - 1.0).abs() < 0.05);
        let wm = ens.column(-1.0).unwrap();
        assert!((sample_variance(&wm) - 1.0).abs() < 0.05);
        let w2 = ens.column(2.0).unwrap();
        let w05 = ens.column(0.5).unwrap();
        let d1: Vec<f64> = w05.iter().zip(&w1).map(|(a, b)| b - a).collect();
        let d2: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| b - a).collect();
        let (c, _) = covariance(&d1, &d2);
        let rho = c / (sample_variance(&d1) * sample_variance(&d2)).sqrt();
        assert!(rho.abs() < 3.0 / 4000f64.sqrt());
    }
}
