use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::discrete_ar::DiscreteSeries;
use crate::error::{param, Error, Result};
use crate::path_core::{NoiseHistory, StreamSeed};

/// Parameters of the heavy-tailed counterexample noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParetoSpec {
    pub alpha: f64,
    pub n: usize,
}

impl ParetoSpec {
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(param("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        if n == 0 {
            return Err(param("n", "must be positive"));
        }
        Ok(Self { alpha, n })
    }
}

/// Increments `Z_k = e^{ξ_k}` with i.i.d. `P(ξ > x) = x^{−α}` for `x > 1`.
///
/// The value `Z_k` overflows a double as soon as `ξ_k > 709`, which happens
/// with probability `709^{−α}`, so the noise is stored and evaluated through
/// `ξ`. As a history, `Z_k` is the jump of `G` at time `−k`, with `G_0 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoNoise {
    alpha: f64,
    xi: Vec<f64>,
}

impl ParetoNoise {
    /// Rebuilds a noise from stored `ξ` values, which must all be at least 1.
    pub fn from_log_increments(alpha: f64, xi: Vec<f64>) -> Result<Self> {
        ParetoSpec::new(alpha, xi.len())?;
        if xi.iter().any(|x| !(*x >= 1.0) || !x.is_finite()) {
            return Err(Error::Data("Pareto samples must be finite and at least 1".into()));
        }
        Ok(Self { alpha, xi })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `ξ_k = log Z_k`.
    pub fn log_increments(&self) -> &[f64] {
        &self.xi
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// `Z_k` as a series on `0..n`, if every value is representable.
    pub fn increments(&self) -> Result<DiscreteSeries> {
        DiscreteSeries::new(0, self.xi.iter().map(|x| x.exp()).collect())
    }

    /// `G_n = Σ_{k=1}^n Z_k` with `G_0 = 0`, if representable.
    pub fn partial_sums(&self) -> Result<DiscreteSeries> {
        let mut values = Vec::with_capacity(self.len() + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for x in &self.xi[1..] {
            acc += x.exp();
            values.push(acc);
        }
        DiscreteSeries::new(0, values)
            .map_err(|_| Error::Data("partial sums overflow; use the log-scale accessors".into()))
    }

    /// `log Σ_{j=0}^k e^{−Hj} Z_j` for every `k`.
    pub fn log_weighted_partial_sums(&self, h: f64) -> Vec<f64> {
        let mut acc = f64::NEG_INFINITY;
        self.xi
            .iter()
            .enumerate()
            .map(|(j, &x)| {
                acc = log_add(acc, x - h * j as f64);
                acc
            })
            .collect()
    }

    /// First `k` at which `Σ_{j=0}^k e^{−Hj} Z_j` exceeds `bound`.
    pub fn first_exceedance(&self, h: f64, bound: f64) -> Option<usize> {
        let level = bound.ln();
        self.log_weighted_partial_sums(h).iter().position(|&s| s > level)
    }
}

/// `log(e^a + e^b)`.
fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn exp_or_inf(log: f64) -> f64 {
    if log > 709.0 {
        f64::INFINITY
    } else {
        log.exp()
    }
}

impl NoiseHistory for ParetoNoise {
    fn history_span(&self) -> f64 {
        self.xi.len() as f64
    }

    fn origin_value(&self) -> Result<f64> {
        Ok(0.0)
    }

    fn resolution(&self) -> f64 {
        1.0
    }

    fn tail_integral(&self, rate: f64, horizon: f64) -> Result<f64> {
        let terms = (horizon.ceil() as usize).min(self.xi.len());
        if terms == 0 {
            return Ok(0.0);
        }
        Ok(exp_or_inf(self.log_weighted_partial_sums(rate)[terms - 1]))
    }

    fn weighted_size(&self, rate: f64, lo: f64, hi: f64) -> Result<f64> {
        // |G_{−u}| = Σ_{j<u} Z_j at integer u.
        let mut acc = f64::NEG_INFINITY;
        let mut worst = f64::NEG_INFINITY;
        for (j, &x) in self.xi.iter().enumerate() {
            acc = log_add(acc, x);
            let u = (j + 1) as f64;
            if u > hi {
                break;
            }
            if u >= lo {
                worst = worst.max(acc - rate * u);
            }
        }
        Ok(exp_or_inf(worst))
    }

    fn increments(&self) -> Vec<f64> {
        self.xi.iter().rev().copied().collect()
    }
}

/// Draws `ξ = u^{−1/α}` by inversion, `u` uniform on `(0, 1)`.
pub fn pareto_counterexample(spec: ParetoSpec, seed: StreamSeed) -> Result<ParetoNoise> {
    let spec = ParetoSpec::new(spec.alpha, spec.n)?;
    let mut rng = seed.rng();
    let inv = -1.0 / spec.alpha;
    let xi = (0..spec.n)
        .map(|_| {
            // Open interval: 1 − [0, 1) is (0, 1].
            let u: f64 = 1.0 - rng.random::<f64>();
            u.powf(inv)
        })
        .collect();
    Ok(ParetoNoise {
        alpha: spec.alpha,
        xi,
    })
}
