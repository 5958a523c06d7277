use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::path_core::StreamSeed;

use super::DiscreteSeries;

/// `X_n = c + Σ_k α_k X_{n−k} + ξ_n + Σ_k β_k ξ_{n−k}` with Gaussian white
/// noise `ξ ~ N(0, noise_sd²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmaSpec {
    pub c: f64,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    pub noise_sd: f64,
}

impl ArmaSpec {
    /// Validates the spec: finite coefficients, positive noise scale, and
    /// every root of `1 − Σ α_k z^k` outside the closed unit disk.
    pub fn new(c: f64, ar: Vec<f64>, ma: Vec<f64>, noise_sd: f64) -> Result<Self> {
        let spec = Self {
            c,
            ar,
            ma,
            noise_sd,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_sd > 0.0 && self.noise_sd.is_finite()) {
            return Err(param("noise_sd", format!("must be positive, got {}", self.noise_sd)));
        }
        if !self.c.is_finite() || self.ar.iter().chain(&self.ma).any(|v| !v.is_finite()) {
            return Err(param("coefficients", "must be finite"));
        }
        let radius = self.ar_spectral_radius();
        if radius >= 1.0 - 1e-12 {
            return Err(Error::Domain(format!(
                "AR polynomial has a root inside or on the unit circle (companion radius {radius})"
            )));
        }
        Ok(())
    }

    /// Largest modulus among the inverse roots of the AR polynomial, i.e.
    /// the spectral radius of its companion matrix.
    pub fn ar_spectral_radius(&self) -> f64 {
        let p = self.ar.len();
        if p == 0 {
            return 0.0;
        }
        let companion = DMatrix::from_fn(p, p, |i, j| {
            if i == 0 {
                self.ar[j]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        companion
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Time scale `−1 / log(radius)` over which the AR part forgets its
    /// initial values.
    pub fn memory_scale(&self) -> f64 {
        let r = self.ar_spectral_radius();
        if r == 0.0 {
            0.0
        } else {
            -1.0 / r.ln()
        }
    }

    /// Smallest admissible burn-in: ten memory scales, and at least the model
    /// order.
    pub fn min_burn_in(&self) -> usize {
        let order = self.ar.len().max(self.ma.len());
        ((10.0 * self.memory_scale()).ceil() as usize).max(order)
    }

    /// Stationary mean `c / (1 − Σ α_k)`.
    pub fn mean(&self) -> f64 {
        self.c / (1.0 - self.ar.iter().sum::<f64>())
    }
}

/// `n` values of a stationary ARMA series on indices `0..n`, after discarding
/// `burn_in` warm-up steps started from the stationary mean.
pub fn simulate_arma(
    spec: &ArmaSpec,
    n: usize,
    burn_in: usize,
    seed: StreamSeed,
) -> Result<DiscreteSeries> {
    spec.validate()?;
    let needed = spec.min_burn_in();
    if burn_in < needed {
        return Err(Error::Precondition(format!(
            "burn-in {burn_in} shorter than ten AR memory scales ({needed})"
        )));
    }
    if n == 0 {
        return Err(param("n", "must be positive"));
    }
    let p = spec.ar.len();
    let q = spec.ma.len();
    let total = burn_in + n;
    let mut rng = seed.rng();
    let mean = spec.mean();
    let mut x = vec![mean; p];
    let mut xi = vec![0.0; q];
    x.reserve(total);
    xi.reserve(total + 1);
    for _ in 0..total {
        let noise = spec.noise_sd * rng.sample::<f64, _>(StandardNormal);
        let t = x.len();
        let s = xi.len();
        let ar: f64 = spec.ar.iter().enumerate().map(|(k, a)| a * x[t - 1 - k]).sum();
        let ma: f64 = spec.ma.iter().enumerate().map(|(k, b)| b * xi[s - 1 - k]).sum();
        xi.push(noise);
        x.push(spec.c + ar + noise + ma);
    }
    DiscreteSeries::new(0, x.split_off(p + burn_in))
}

/// Truncated Wold form `X_n = Σ_j b_j ξ_{n−j}` with standard Gaussian `ξ`,
/// on indices `0..n`.
pub fn simulate_ma_truncated(b: &[f64], n: usize, seed: StreamSeed) -> Result<DiscreteSeries> {
    if b.is_empty() {
        return Err(param("b", "need at least one coefficient"));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(param("b", "coefficients must be finite"));
    }
    if n == 0 {
        return Err(param("n", "must be positive"));
    }
    let mut rng = seed.rng();
    let lag = b.len() - 1;
    let xi: Vec<f64> = (0..n + lag).map(|_| rng.sample(StandardNormal)).collect();
    let values = (0..n)
        .map(|i| {
            let now = i + lag;
            b.iter().enumerate().map(|(j, bj)| bj * xi[now - j]).sum()
        })
        .collect();
    DiscreteSeries::new(0, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stationarity_check() {
        assert!(ArmaSpec::new(0.0, vec![0.5], vec![], 1.0).is_ok());
        assert!(ArmaSpec::new(0.0, vec![1.0], vec![], 1.0).is_err());
        assert!(ArmaSpec::new(0.0, vec![1.2, -0.2], vec![], 1.0).is_err());
        assert!(ArmaSpec::new(0.0, vec![0.5, 0.3], vec![0.4], 1.0).is_ok());
        // Complex roots with modulus 1/sqrt(0.9).
        let s = ArmaSpec::new(0.0, vec![0.0, -0.9], vec![], 1.0).unwrap();
        assert!((s.ar_spectral_radius() - 0.9f64.sqrt()).abs() < 1e-12);
        assert!(ArmaSpec::new(0.0, vec![0.5], vec![], 0.0).is_err());
    }

    #[test]
    fn burn_in_is_enforced() {
        let s = ArmaSpec::new(0.0, vec![0.9], vec![], 1.0).unwrap();
        assert_eq!(s.min_burn_in(), 95);
        assert!(simulate_arma(&s, 10, 50, StreamSeed::new(1, 0)).is_err());
        assert!(simulate_arma(&s, 10, 95, StreamSeed::new(1, 0)).is_ok());
    }

    #[test]
    fn deterministic_under_seed() {
        let s = ArmaSpec::new(0.3, vec![0.5], vec![0.2], 1.0).unwrap();
        let a = simulate_arma(&s, 100, 100, StreamSeed::new(5, 2)).unwrap();
        let b = simulate_arma(&s, 100, 100, StreamSeed::new(5, 2)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.start(), 0);
        assert_eq!(a.len(), 100);
    }

    #[test]
    fn unit_ma_is_the_innovation() {
        let x = simulate_ma_truncated(&[1.0], 50, StreamSeed::new(3, 0)).unwrap();
        let mut rng = StreamSeed::new(3, 0).rng();
        for v in x.values() {
            let e: f64 = rng.sample(StandardNormal);
            assert_eq!(*v, e);
        }
    }
}
