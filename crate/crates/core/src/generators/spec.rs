use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrete_ar::{simulate_arma, simulate_ma_truncated, ArmaSpec, DiscreteSeries};
use crate::error::{param, Error, Result};
use crate::path_core::{Ensemble, HurstParam, PathGenerator, PathRng, SamplePath, StreamSeed, TimeGrid};

use super::brownian::Brownian;
use super::fbm::{Fbm, FbmSpec, StationaryLampertiFbm};
use super::langevin_driven::{
    fou_first_kind_generator, fou_second_kind_generator, ornstein_uhlenbeck, BmLampertiNoise,
    SecondKindNoise,
};
use super::pareto::{pareto_counterexample, ParetoNoise, ParetoSpec};

/// Declarative description of a generator and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessSpec {
    Brownian,
    Fbm { hurst: f64 },
    /// Stationary `e^{−Ht} B^H_{e^t}`.
    LampertiFbm { hurst: f64 },
    BmLampertiNoise { theta: f64 },
    SecondKindNoise { hurst: f64 },
    Ou { theta: f64 },
    FouFirstKind { hurst: f64, theta: f64 },
    FouSecondKind { hurst: f64, theta: f64 },
    /// Deterministic `G_t = slope · t`.
    Linear { slope: f64 },
    Pareto { alpha: f64, n: usize },
    Arma {
        #[serde(default)]
        c: f64,
        #[serde(default)]
        ar: Vec<f64>,
        #[serde(default)]
        ma: Vec<f64>,
        noise_sd: f64,
        n: usize,
        burn_in: Option<usize>,
    },
    MaTruncated { b: Vec<f64>, n: usize },
}

/// Output of [`ProcessSpec::generate`].
#[derive(Debug, Clone)]
pub enum Generated {
    Paths(Ensemble),
    Series {
        series: Vec<DiscreteSeries>,
        seed: u64,
        stream_ids: Vec<u64>,
    },
    Pareto {
        noises: Vec<ParetoNoise>,
        seed: u64,
        stream_ids: Vec<u64>,
    },
}

struct Linear {
    slope: f64,
    grid: Arc<TimeGrid>,
}

impl PathGenerator for Linear {
    fn output_grid(&self) -> &Arc<TimeGrid> {
        &self.grid
    }

    fn sample_with(&self, _rng: &mut PathRng) -> Result<SamplePath> {
        SamplePath::from_fn(self.grid.clone(), |t| self.slope * t)
    }
}

impl ProcessSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Brownian => "brownian",
            Self::Fbm { .. } => "fbm",
            Self::LampertiFbm { .. } => "lamperti_fbm",
            Self::BmLampertiNoise { .. } => "bm_lamperti_noise",
            Self::SecondKindNoise { .. } => "second_kind_noise",
            Self::Ou { .. } => "ou",
            Self::FouFirstKind { .. } => "fou_first_kind",
            Self::FouSecondKind { .. } => "fou_second_kind",
            Self::Linear { .. } => "linear",
            Self::Pareto { .. } => "pareto",
            Self::Arma { .. } => "arma",
            Self::MaTruncated { .. } => "ma_truncated",
        }
    }

    /// Whether the output lives on a time grid (as opposed to integer
    /// indices).
    pub fn needs_grid(&self) -> bool {
        !matches!(self, Self::Pareto { .. } | Self::Arma { .. } | Self::MaTruncated { .. })
    }

    /// Parameter checks that do not need a grid.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(param(name, format!("must be positive, got {v}")))
            }
        };
        match self {
            Self::Brownian => Ok(()),
            Self::Fbm { hurst } | Self::LampertiFbm { hurst } | Self::SecondKindNoise { hurst } => {
                HurstParam::fractional(*hurst).map(|_| ())
            }
            Self::BmLampertiNoise { theta } | Self::Ou { theta } => positive("theta", *theta),
            Self::FouFirstKind { hurst, theta } | Self::FouSecondKind { hurst, theta } => {
                HurstParam::fractional(*hurst)?;
                positive("theta", *theta)
            }
            Self::Linear { slope } => {
                if slope.is_finite() {
                    Ok(())
                } else {
                    Err(param("slope", "must be finite"))
                }
            }
            Self::Pareto { alpha, n } => ParetoSpec::new(*alpha, *n).map(|_| ()),
            Self::Arma {
                c,
                ar,
                ma,
                noise_sd,
                n,
                burn_in,
            } => {
                let spec = ArmaSpec::new(*c, ar.clone(), ma.clone(), *noise_sd)?;
                if *n == 0 {
                    return Err(param("n", "must be positive"));
                }
                if let Some(b) = burn_in {
                    if *b < spec.min_burn_in() {
                        return Err(param(
                            "burn_in",
                            format!("must be at least {} for this model", spec.min_burn_in()),
                        ));
                    }
                }
                Ok(())
            }
            Self::MaTruncated { b, n } => {
                if b.is_empty() || b.iter().any(|v| !v.is_finite()) {
                    return Err(param("b", "need finite coefficients"));
                }
                if *n == 0 {
                    return Err(param("n", "must be positive"));
                }
                Ok(())
            }
        }
    }

    /// Generator of one path on `grid`, for grid-based kinds.
    pub fn path_generator(&self, grid: Arc<TimeGrid>) -> Result<Box<dyn PathGenerator + Send>> {
        self.validate()?;
        Ok(match self {
            Self::Brownian => Box::new(Brownian::new(grid)),
            Self::Fbm { hurst } => Box::new(Fbm::new(FbmSpec::new(*hurst, grid)?)?),
            Self::LampertiFbm { hurst } => Box::new(StationaryLampertiFbm::new(*hurst, grid)?),
            Self::BmLampertiNoise { theta } => Box::new(BmLampertiNoise::new(*theta, grid)?),
            Self::SecondKindNoise { hurst } => Box::new(SecondKindNoise::new(*hurst, grid)?),
            Self::Ou { theta } => Box::new(ornstein_uhlenbeck(*theta, grid)?),
            Self::FouFirstKind { hurst, theta } => Box::new(fou_first_kind_generator(*hurst, *theta, grid)?),
            Self::FouSecondKind { hurst, theta } => Box::new(fou_second_kind_generator(*hurst, *theta, grid)?),
            Self::Linear { slope } => Box::new(Linear { slope: *slope, grid }),
            _ => {
                return Err(Error::Domain(format!(
                    "{} produces integer-indexed series, not paths on a grid",
                    self.name()
                )))
            }
        })
    }

    /// `n_paths` independent realizations on streams `0..n_paths`.
    pub fn generate(&self, grid: Option<Arc<TimeGrid>>, seed: u64, n_paths: usize) -> Result<Generated> {
        self.validate()?;
        if n_paths == 0 {
            return Err(param("paths", "must be positive"));
        }
        let stream_ids: Vec<u64> = (0..n_paths as u64).collect();
        if self.needs_grid() {
            let grid = grid.ok_or_else(|| param("grid", format!("{} needs a time grid", self.name())))?;
            let gen = self.path_generator(grid)?;
            return Ok(Generated::Paths(Ensemble::generate(gen.as_ref(), seed, n_paths)?));
        }
        match self {
            Self::Pareto { alpha, n } => {
                let spec = ParetoSpec::new(*alpha, *n)?;
                let noises = stream_ids
                    .par_iter()
                    .map(|&s| pareto_counterexample(spec, StreamSeed::new(seed, s)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Generated::Pareto {
                    noises,
                    seed,
                    stream_ids,
                })
            }
            Self::Arma {
                c,
                ar,
                ma,
                noise_sd,
                n,
                burn_in,
            } => {
                let spec = ArmaSpec::new(*c, ar.clone(), ma.clone(), *noise_sd)?;
                let burn_in = burn_in.unwrap_or_else(|| spec.min_burn_in().max(100));
                let series = stream_ids
                    .par_iter()
                    .map(|&s| simulate_arma(&spec, *n, burn_in, StreamSeed::new(seed, s)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Generated::Series {
                    series,
                    seed,
                    stream_ids,
                })
            }
            Self::MaTruncated { b, n } => {
                let series = stream_ids
                    .par_iter()
                    .map(|&s| simulate_ma_truncated(b, *n, StreamSeed::new(seed, s)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Generated::Series {
                    series,
                    seed,
                    stream_ids,
                })
            }
            _ => unreachable!("grid-based kinds return above"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_round_trip() {
        let specs = vec![
            ProcessSpec::Fbm { hurst: 0.75 },
            ProcessSpec::Arma {
                c: 0.0,
                ar: vec![0.5],
                ma: vec![],
                noise_sd: 1.0,
                n: 10,
                burn_in: None,
            },
            ProcessSpec::Brownian,
        ];
        for s in specs {
            let j = serde_json::to_string(&s).unwrap();
            assert_eq!(serde_json::from_str::<ProcessSpec>(&j).unwrap(), s);
        }
        let parsed: ProcessSpec = serde_json::from_str(r#"{"kind":"fou_first_kind","hurst":0.7,"theta":1}"#).unwrap();
        assert_eq!(parsed, ProcessSpec::FouFirstKind { hurst: 0.7, theta: 1.0 });
    }

    #[test]
    fn validation() {
        assert!(ProcessSpec::Fbm { hurst: 1.5 }.validate().is_err());
        assert!(ProcessSpec::Ou { theta: -1.0 }.validate().is_err());
        assert!(ProcessSpec::Pareto { alpha: 0.5, n: 10 }.validate().is_ok());
        let g = Arc::new(TimeGrid::uniform(0.0, 1.0, 0.1).unwrap());
        assert!(ProcessSpec::Pareto { alpha: 0.5, n: 10 }.path_generator(g).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let g = Arc::new(TimeGrid::uniform(0.0, 1.0, 0.1).unwrap());
        let spec = ProcessSpec::Fbm { hurst: 0.3 };
        let a = match spec.generate(Some(g.clone()), 4, 3).unwrap() {
            Generated::Paths(e) => e,
            _ => unreachable!(),
        };
        let b = match spec.generate(Some(g), 4, 3).unwrap() {
            Generated::Paths(e) => e,
            _ => unreachable!(),
        };
        for (x, y) in a.paths().iter().zip(b.paths()) {
            assert_eq!(x.values(), y.values());
        }
    }
}
