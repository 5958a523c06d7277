use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lamperti::lamperti_forward;
use crate::path_core::{GridKind, HurstParam, PathGenerator, PathRng, SamplePath, StreamSeed, TimeGrid};

use super::gaussian::{CholeskySampler, CirculantEmbedding};

/// Longest increment lattice built to place time zero on a uniform grid.
const MAX_LATTICE: usize = 1 << 24;

/// `R(s, t) = ½(|s|^{2H} + |t|^{2H} − |t − s|^{2H})`, the covariance of
/// two-sided fractional Brownian motion.
pub fn fbm_covariance(h: f64, s: f64, t: f64) -> f64 {
    let p = 2.0 * h;
    0.5 * (s.abs().powf(p) + t.abs().powf(p) - (t - s).abs().powf(p))
}

/// Autocovariance at lag `k` of fBm increments over steps of length `step`.
pub fn fgn_autocovariance(h: f64, step: f64, k: usize) -> f64 {
    let p = 2.0 * h;
    let k = k as f64;
    let core = if k == 0.0 {
        2.0
    } else {
        (k + 1.0).powf(p) - 2.0 * k.powf(p) + (k - 1.0).powf(p)
    };
    0.5 * step.powf(p) * core
}

/// Autocovariance at lag `τ ≥ 0` of the stationary process
/// `U_t = e^{−Ht} B^H_{e^t}`:
/// `½(e^{−Hτ} + e^{Hτ}(1 − (1 − e^{−τ})^{2H}))`.
pub fn lamperti_fbm_autocovariance(h: f64, tau: f64) -> f64 {
    let tau = tau.abs();
    if tau == 0.0 {
        return 1.0;
    }
    let tail = -(2.0 * h * (-(-tau).exp()).ln_1p()).exp_m1();
    0.5 * ((-h * tau).exp() + (h * tau).exp() * tail)
}

/// Fractional Brownian motion on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FbmMethod {
    /// Circulant embedding of the increments on a uniform lattice through 0.
    CirculantIncrements,
    /// Circulant embedding of `e^{−Ht}B^H_{e^t}` on a geometric grid.
    CirculantLamperti,
    /// Cholesky factor of the covariance matrix on the grid.
    Cholesky,
}

#[derive(Debug, Clone)]
pub struct FbmSpec {
    pub h: HurstParam,
    pub grid: Arc<TimeGrid>,
}

impl FbmSpec {
    pub fn new(h: f64, grid: Arc<TimeGrid>) -> Result<Self> {
        Ok(Self {
            h: HurstParam::fractional(h)?,
            grid,
        })
    }
}

enum Sampler {
    Increments {
        ce: CirculantEmbedding,
        anchor: usize,
        offset: usize,
    },
    Lamperti(StationaryLampertiFbm),
    Cholesky(CholeskySampler),
}

/// Fractional Brownian motion with `B^H_0 = 0`.
///
/// Uniform grids whose lattice passes through time zero use exact circulant
/// embedding of the increments; geometric grids of positive times sample
/// `e^{−Ht}B^H_{e^t}` on the uniform log-grid by circulant embedding and map
/// it back. Everything else, or an embedding that fails, is sampled from the
/// Cholesky factor of the covariance matrix.
pub struct Fbm {
    spec: FbmSpec,
    sampler: Sampler,
}

impl std::fmt::Debug for Fbm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fbm")
            .field("H", &self.spec.h)
            .field("method", &self.method())
            .finish()
    }
}

impl Fbm {
    pub fn new(spec: FbmSpec) -> Result<Self> {
        let h = spec.h.value();
        let grid = &spec.grid;
        let sampler = match grid.kind() {
            GridKind::Uniform { step } => Self::increment_sampler(h, grid, step),
            GridKind::Geometric { .. } => {
                let logs = grid.map(f64::ln, GridKind::Explicit)?;
                let step = logs.points()[1] - logs.points()[0];
                let log_grid = TimeGrid::uniform_n(logs.start(), step, logs.len())?;
                StationaryLampertiFbm::circulant(h, Arc::new(log_grid)).map(Sampler::Lamperti)
            }
            GridKind::Explicit => None,
        };
        let sampler = match sampler {
            Some(s) => s,
            None => {
                let p = grid.points();
                Sampler::Cholesky(CholeskySampler::new(p.len(), |i, j| fbm_covariance(h, p[i], p[j]))?)
            }
        };
        Ok(Self { spec, sampler })
    }

    fn increment_sampler(h: f64, grid: &TimeGrid, step: f64) -> Option<Sampler> {
        let j0 = -grid.start() / step;
        let i0 = j0.round();
        if (j0 - i0).abs() > 1e-6 {
            return None;
        }
        let n = grid.len() as i64;
        let i0 = i0 as i64;
        let lo = i0.min(0);
        let hi = i0.max(n - 1);
        let len = (hi - lo + 1) as usize;
        if len > MAX_LATTICE {
            return None;
        }
        let ce = CirculantEmbedding::new(len - 1, |k| fgn_autocovariance(h, step, k))?;
        Some(Sampler::Increments {
            ce,
            anchor: (i0 - lo) as usize,
            offset: (-lo) as usize,
        })
    }

    pub fn method(&self) -> FbmMethod {
        match self.sampler {
            Sampler::Increments { .. } => FbmMethod::CirculantIncrements,
            Sampler::Lamperti(_) => FbmMethod::CirculantLamperti,
            Sampler::Cholesky(_) => FbmMethod::Cholesky,
        }
    }

    pub fn spec(&self) -> &FbmSpec {
        &self.spec
    }
}

impl PathGenerator for Fbm {
    fn output_grid(&self) -> &Arc<TimeGrid> {
        &self.spec.grid
    }

    fn sample_with(&self, rng: &mut PathRng) -> Result<SamplePath> {
        let n = self.spec.grid.len();
        let values = match &self.sampler {
            Sampler::Increments { ce, anchor, offset } => {
                let inc = ce.sample(rng);
                let mut x = Vec::with_capacity(inc.len() + 1);
                x.push(0.0);
                let mut acc = 0.0;
                for d in inc {
                    acc += d;
                    x.push(acc);
                }
                let zero = x[*anchor];
                x[*offset..*offset + n].iter().map(|v| v - zero).collect()
            }
            Sampler::Lamperti(u) => {
                let u = u.sample_with(rng)?;
                let x = lamperti_forward(&u, self.spec.h)?;
                x.into_values()
            }
            Sampler::Cholesky(c) => c.sample(rng),
        };
        SamplePath::new(self.spec.grid.clone(), values)
    }
}

/// One fBm path.
pub fn fbm(spec: FbmSpec, seed: StreamSeed) -> Result<SamplePath> {
    Fbm::new(spec)?.sample(seed)
}

/// The stationary Gaussian process `e^{−Ht} B^H_{e^t}` on a uniform grid.
pub struct StationaryLampertiFbm {
    h: f64,
    grid: Arc<TimeGrid>,
    ce: CirculantEmbedding,
}

impl StationaryLampertiFbm {
    pub fn new(h: f64, grid: Arc<TimeGrid>) -> Result<Self> {
        let h = HurstParam::fractional(h)?.value();
        if grid.step().is_none() {
            return Err(Error::Domain("stationary sampler needs a uniform grid".into()));
        }
        Self::circulant(h, grid.clone()).ok_or_else(|| {
            Error::Domain(format!(
                "circulant embedding failed for H = {h} on {} points",
                grid.len()
            ))
        })
    }

    fn circulant(h: f64, grid: Arc<TimeGrid>) -> Option<Self> {
        let p = grid.points();
        let step = p[1] - p[0];
        let ce = CirculantEmbedding::new(grid.len(), |k| lamperti_fbm_autocovariance(h, k as f64 * step))?;
        Some(Self { h, grid, ce })
    }

    pub fn hurst(&self) -> f64 {
        self.h
    }
}

impl PathGenerator for StationaryLampertiFbm {
    fn output_grid(&self) -> &Arc<TimeGrid> {
        &self.grid
    }

    fn sample_with(&self, rng: &mut PathRng) -> Result<SamplePath> {
        SamplePath::new(self.grid.clone(), self.ce.sample(rng))
    }
}
