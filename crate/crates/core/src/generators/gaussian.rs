use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::path_core::PathRng;

/// Largest covariance matrix factored by [`CholeskySampler`].
pub const CHOLESKY_MAX_POINTS: usize = 4096;

/// Eigenvalues above `−EIGEN_TOL · λ_max` count as rounding noise and are
/// clipped to zero.
const EIGEN_TOL: f64 = 1e-10;

/// Exact sampler for a stationary Gaussian sequence of length `n` with
/// autocovariance `γ(k)`, by embedding the covariance in a circulant matrix.
pub struct CirculantEmbedding {
    n: usize,
    scale: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CirculantEmbedding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantEmbedding")
            .field("n", &self.n)
            .field("size", &self.scale.len())
            .finish()
    }
}

impl CirculantEmbedding {
    /// Tries embedding sizes `m, 2m, 4m` with `m` the smallest power of two
    /// at least `2(n − 1)`. Returns `None` if every circulant has a clearly
    /// negative eigenvalue.
    pub fn new(n: usize, gamma: impl Fn(usize) -> f64) -> Option<Self> {
        let base = (2 * n.saturating_sub(1)).max(2).next_power_of_two();
        let mut planner = FftPlanner::new();
        for m in [base, 2 * base, 4 * base] {
            let fft = planner.plan_fft_forward(m);
            let mut c: Vec<Complex<f64>> = (0..m)
                .map(|j| Complex::new(gamma(j.min(m - j)), 0.0))
                .collect();
            fft.process(&mut c);
            let lambda_max = c.iter().map(|z| z.re).fold(0.0, f64::max);
            if !(lambda_max > 0.0) || c.iter().any(|z| !z.re.is_finite()) {
                return None;
            }
            if c.iter().any(|z| z.re < -EIGEN_TOL * lambda_max) {
                continue;
            }
            let scale = c
                .iter()
                .map(|z| (z.re.max(0.0) / m as f64).sqrt())
                .collect();
            return Some(Self { n, scale, fft });
        }
        None
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Size of the circulant actually used.
    pub fn embedding_size(&self) -> usize {
        self.scale.len()
    }

    pub fn sample(&self, rng: &mut PathRng) -> Vec<f64> {
        let mut w: Vec<Complex<f64>> = self
            .scale
            .iter()
            .map(|&s| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(s * re, s * im)
            })
            .collect();
        self.fft.process(&mut w);
        w[..self.n].iter().map(|z| z.re).collect()
    }
}

/// Sampler for a centered Gaussian vector with a given covariance matrix.
#[derive(Debug, Clone)]
pub struct CholeskySampler {
    lower: DMatrix<f64>,
}

impl CholeskySampler {
    pub fn new(n: usize, cov: impl Fn(usize, usize) -> f64) -> Result<Self> {
        if n > CHOLESKY_MAX_POINTS {
            return Err(Error::Size(format!(
                "Cholesky sampling of {n} points exceeds the limit of {CHOLESKY_MAX_POINTS}"
            )));
        }
        let matrix = DMatrix::from_fn(n, n, |i, j| cov(i, j));
        let lower = matrix
            .cholesky()
            .ok_or_else(|| Error::Domain("covariance matrix is not positive definite".into()))?
            .unpack();
        Ok(Self { lower })
    }

    pub fn len(&self) -> usize {
        self.lower.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.nrows() == 0
    }

    pub fn sample(&self, rng: &mut PathRng) -> Vec<f64> {
        let z = DVector::from_fn(self.len(), |_, _| rng.sample(StandardNormal));
        (&self.lower * z).as_slice().to_vec()
    }
}
