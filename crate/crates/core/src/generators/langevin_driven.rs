use std::sync::Arc;

use crate::error::{param, Error, Result};
use crate::langevin::{default_burn_in, stationary_solution, DEFAULT_TOL};
use crate::path_core::{
    cumulative_exp_integral, Ensemble, GridKind, PathGenerator, PathRng, SamplePath, StreamSeed,
    TimeGrid,
};

use super::brownian::{brownian_values, Brownian};
use super::fbm::{Fbm, FbmSpec, StationaryLampertiFbm};

use rand::Rng;
use rand_distr::StandardNormal;

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(param(name, format!("must be positive, got {v}")))
    }
}

/// Uniform grid `−KΔ, ..., end` with the step of `output`, long enough to
/// hold `burn_in` before time zero. The output grid must be uniform, start at
/// a non-negative time and have time zero on its lattice.
fn burn_in_grid(output: &TimeGrid, burn_in: f64) -> Result<TimeGrid> {
    let step = match output.kind() {
        GridKind::Uniform { step } => step,
        _ => return Err(Error::Domain("stationary generators need a uniform output grid".into())),
    };
    let j0 = output.start() / step;
    if output.start() < 0.0 || (j0 - j0.round()).abs() > 1e-6 {
        return Err(Error::Domain(format!(
            "output grid must start at a non-negative multiple of its step, starts at {}",
            output.start()
        )));
    }
    let k = (burn_in / step).ceil() as usize;
    let last = (output.end() / step).round() as usize;
    TimeGrid::uniform_n(-(k as f64) * step, step, k + last + 1)
}

/// Stationary solution of the Langevin equation with rate `theta` driven by
/// a noise sampled on a burn-in grid, reported on the output grid.
pub struct StationaryLangevin {
    noise: Box<dyn PathGenerator + Send>,
    theta: f64,
    tol: f64,
    output: Arc<TimeGrid>,
}

impl StationaryLangevin {
    /// `noise` receives the burn-in grid and returns the driving generator.
    pub fn new(
        theta: f64,
        output: Arc<TimeGrid>,
        burn_in: f64,
        noise: impl FnOnce(Arc<TimeGrid>) -> Result<Box<dyn PathGenerator + Send>>,
    ) -> Result<Self> {
        let theta = positive("theta", theta)?;
        positive("burn_in", burn_in)?;
        let grid = Arc::new(burn_in_grid(&output, burn_in)?);
        Ok(Self {
            noise: noise(grid)?,
            theta,
            tol: DEFAULT_TOL,
            output,
        })
    }

    pub fn noise_grid(&self) -> &Arc<TimeGrid> {
        self.noise.output_grid()
    }

    /// Noise path and the stationary solution on the output grid.
    pub fn sample_pair(&self, rng: &mut PathRng) -> Result<(SamplePath, SamplePath)> {
        let g = self.noise.sample_with(rng)?;
        let s = stationary_solution(&g, self.theta, self.tol)?;
        let u = s.solution.path.restrict(self.output.start(), self.output.end())?;
        if u.len() != self.output.len() {
            return Err(Error::Data("solution grid does not match the output grid".into()));
        }
        Ok((g, SamplePath::new(self.output.clone(), u.into_values())?))
    }
}

impl PathGenerator for StationaryLangevin {
    fn output_grid(&self) -> &Arc<TimeGrid> {
        &self.output
    }

    fn sample_with(&self, rng: &mut PathRng) -> Result<SamplePath> {
        self.sample_pair(rng).map(|(_, u)| u)
    }
}

/// Stationary Ornstein–Uhlenbeck process: the stationary solution driven by
/// Brownian motion, with burn-in `40/θ`.
pub fn ornstein_uhlenbeck(theta: f64, grid: Arc<TimeGrid>) -> Result<StationaryLangevin> {
    let theta = positive("theta", theta)?;
    StationaryLangevin::new(theta, grid, default_burn_in(theta), |g| {
        Ok(Box::new(Brownian::new(g)) as Box<dyn PathGenerator + Send>)
    })
}

/// Fractional OU process of the first kind: the stationary solution driven
/// by fBm.
pub fn fou_first_kind_generator(h: f64, theta: f64, grid: Arc<TimeGrid>) -> Result<StationaryLangevin> {
    let theta = positive("theta", theta)?;
    StationaryLangevin::new(theta, grid, default_burn_in(theta), |g| {
        Ok(Box::new(Fbm::new(FbmSpec::new(h, g)?)?) as Box<dyn PathGenerator + Send>)
    })
}

pub fn fou_first_kind(h: f64, theta: f64, grid: Arc<TimeGrid>, seed: u64, n_paths: usize) -> Result<Ensemble> {
    Ensemble::generate(&fou_first_kind_generator(h, theta, grid)?, seed, n_paths)
}

/// Fractional OU process of the second kind: the stationary solution driven
/// by [`SecondKindNoise`].
pub fn fou_second_kind_generator(h: f64, theta: f64, grid: Arc<TimeGrid>) -> Result<StationaryLangevin> {
    let theta = positive("theta", theta)?;
    StationaryLangevin::new(theta, grid, default_burn_in(theta), |g| {
        Ok(Box::new(SecondKindNoise::new(h, g)?) as Box<dyn PathGenerator + Send>)
    })
}

pub fn fou_second_kind(h: f64, theta: f64, grid: Arc<TimeGrid>, seed: u64, n_paths: usize) -> Result<Ensemble> {
    Ensemble::generate(&fou_second_kind_generator(h, theta, grid)?, seed, n_paths)
}

/// Time change `a_t = (H/α) e^{(α/H) t}`, under which `e^{−αt} B^H_{a_t}` is
/// stationary for every `α > 0`.
pub fn second_kind_time_change(h: f64, alpha: f64, t: f64) -> f64 {
    (h / alpha) * ((alpha / h) * t).exp()
}

/// `Y_t = ∫_0^t e^{−s} dB^H_{a_s}` with `a_s = H e^{s/H}`, on a uniform grid
/// through time zero.
///
/// `B^H_{a_s} = H^H e^s V_{s/H + log H}` with `V = e^{−Hv} B^H_{e^v}`
/// stationary, so one path of `V` on the uniform grid of step `Δ/H` gives the
/// time-changed fBm exactly at every grid point.
pub struct SecondKindNoise {
    h: f64,
    grid: Arc<TimeGrid>,
    stationary: StationaryLampertiFbm,
}

impl SecondKindNoise {
    pub fn new(h: f64, grid: Arc<TimeGrid>) -> Result<Self> {
        let step = grid
            .step()
            .ok_or_else(|| Error::Domain("second-kind noise needs a uniform grid".into()))?;
        grid.locate(0.0)?;
        if !(h > 0.0 && h < 1.0) {
            return Err(param("H", format!("must lie in (0, 1), got {h}")));
        }
        let v_grid = TimeGrid::uniform_n(grid.start() / h + h.ln(), step / h, grid.len())?;
        Ok(Self {
            h,
            stationary: StationaryLampertiFbm::new(h, Arc::new(v_grid))?,
            grid,
        })
    }

    /// `s ↦ B^H_{a_s}` and `Y` on the grid.
    pub fn sample_parts(&self, rng: &mut PathRng) -> Result<(SamplePath, SamplePath)> {
        let v = self.stationary.sample_with(rng)?;
        let scale = self.h.powf(self.h);
        let z: Vec<f64> = self
            .grid
            .points()
            .iter()
            .zip(v.values())
            .map(|(&s, &x)| scale * s.exp() * x)
            .collect();
        let z = SamplePath::new(self.grid.clone(), z)?;
        let y = cumulative_exp_integral(&z, -1.0, 0.0)?;
        let y = z.with_values(y)?;
        Ok((z, y))
    }
}

impl PathGenerator for SecondKindNoise {
    fn output_grid(&self) -> &Arc<TimeGrid> {
        &self.grid
    }

    fn sample_with(&self, rng: &mut PathRng) -> Result<SamplePath> {
        self.sample_parts(rng).map(|(_, y)| y)
    }
}

/// `X^{(α,H)}_t = e^{−αt} B^H_{a_t}` from a path of `B^H` on positive times,
/// on the grid `t = (H/α) log(α m / H)` of the times `m` with `m = a_t`.
pub fn time_changed_fbm(b: &SamplePath, h: f64, alpha: f64) -> Result<SamplePath> {
    positive("H", h)?;
    positive("alpha", alpha)?;
    if b.grid().start() <= 0.0 {
        return Err(Error::Domain("time change needs positive times".into()));
    }
    let c = alpha / h;
    let grid = b.grid().map(|m| (m * c).ln() / c, GridKind::Explicit)?;
    let values = grid
        .points()
        .iter()
        .zip(b.values())
        .map(|(&t, &x)| (-alpha * t).exp() * x)
        .collect();
    SamplePath::new(Arc::new(grid), values)
}

/// `X^{(θ,H)}_{e^t} = ∫_0^{H e^{t/H}} (u/H)^{H(θ−1)} dB^H_u` as a trapezoid
/// Riemann–Stieltjes sum, from `z_s = B^H_{a_s}` on an increasing grid of `s`
/// with `a_s = H e^{s/H}`. The integrand is `e^{(θ−1)s}` in the variable
/// `s`, and the sum starts at the first grid point in place of `u = 0`. The
/// result is indexed by `t = log m` and equals `e^{θt}` times the
/// second-kind process with rate `θ`.
pub fn second_kind_integral_representation(z: &SamplePath, theta: f64) -> Result<SamplePath> {
    positive("theta", theta)?;
    let s = z.times();
    let v = z.values();
    let f = |x: f64| ((theta - 1.0) * x).exp();
    let mut out = vec![0.0; z.len()];
    for k in 1..z.len() {
        out[k] = out[k - 1] + 0.5 * (f(s[k - 1]) + f(s[k])) * (v[k] - v[k - 1]);
    }
    z.with_values(out)
}

/// `G_t = (2θ)^{−1/2} ∫_0^t e^{−θu} dW_{e^{2θu}}` together with
/// `U_t = (2θ)^{−1/2} e^{−θt} W_{e^{2θt}}`, both from one Brownian path
/// sampled at the times `e^{2θt}`. `U` is the stationary OU process driven
/// by `G`, and `G` has the increments of a Brownian motion.
pub struct BmLampertiNoise {
    theta: f64,
    grid: Arc<TimeGrid>,
}

impl BmLampertiNoise {
    pub fn new(theta: f64, grid: Arc<TimeGrid>) -> Result<Self> {
        let theta = positive("theta", theta)?;
        grid.locate(0.0)?;
        Ok(Self { theta, grid })
    }

    pub fn sample_pair(&self, rng: &mut PathRng) -> Result<(SamplePath, SamplePath)> {
        let theta = self.theta;
        let tau: Vec<f64> = self.grid.points().iter().map(|t| (2.0 * theta * t).exp()).collect();
        let w = brownian_values(&tau, &mut |dt: f64| dt.sqrt() * rng.sample::<f64, _>(StandardNormal));
        let z = SamplePath::new(self.grid.clone(), w)?;
        let norm = (2.0 * theta).sqrt().recip();
        let g: Vec<f64> = cumulative_exp_integral(&z, -theta, 0.0)?.iter().map(|v| norm * v).collect();
        let u: Vec<f64> = self
            .grid
            .points()
            .iter()
            .zip(z.values())
            .map(|(&t, &x)| norm * (-theta * t).exp() * x)
            .collect();
        Ok((z.with_values(g)?, z.with_values(u)?))
    }
}

impl PathGenerator for BmLampertiNoise {
    fn output_grid(&self) -> &Arc<TimeGrid> {
        &self.grid
    }

    fn sample_with(&self, rng: &mut PathRng) -> Result<SamplePath> {
        self.sample_pair(rng).map(|(g, _)| g)
    }
}

pub fn bm_lamperti_noise(theta: f64, grid: Arc<TimeGrid>, seed: StreamSeed) -> Result<SamplePath> {
    BmLampertiNoise::new(theta, grid)?.sample(seed)
}

/// [`bm_lamperti_noise`] and the matching stationary OU path.
pub fn bm_lamperti_pair(
    theta: f64,
    grid: Arc<TimeGrid>,
    seed: StreamSeed,
) -> Result<(SamplePath, SamplePath)> {
    BmLampertiNoise::new(theta, grid)?.sample_pair(&mut seed.rng())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamperti::lamperti_inverse;
    use crate::langevin::solve_forward;
    use crate::path_core::HurstParam;
    use crate::stat_tests::sample_variance;

    #[test]
    fn burn_in_grid_reaches_back() {
        let out = TimeGrid::uniform(0.0, 2.0, 0.01).unwrap();
        let g = burn_in_grid(&out, 40.0).unwrap();
        assert!(g.start() <= -40.0);
        assert!(g.locate(0.0).is_ok());
        assert!((g.end() - 2.0).abs() < 1e-9);
        let odd = TimeGrid::uniform(0.005, 2.0, 0.01).unwrap();
        assert!(burn_in_grid(&odd, 40.0).is_err());
    }

    #[test]
    fn bm_noise_drives_the_matching_ou_path() {
        let theta = 1.0;
        let grid = Arc::new(TimeGrid::uniform(0.0, 5.0, 1e-4).unwrap());
        let (g, u) = bm_lamperti_pair(theta, grid, StreamSeed::new(21, 0)).unwrap();
        assert_eq!(g.at(0.0).unwrap(), 0.0);
        let s = solve_forward(&g, theta, u.values()[0]).unwrap();
        let err = s
            .path
            .values()
            .iter()
            .zip(u.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn second_kind_with_alpha_equal_h_is_inverse_lamperti() {
        let h = 0.7;
        let grid = Arc::new(TimeGrid::geometric(0.5, 20.0, 1.01).unwrap());
        let b = super::super::fbm::fbm(FbmSpec::new(h, grid).unwrap(), StreamSeed::new(4, 0)).unwrap();
        let x = time_changed_fbm(&b, h, h).unwrap();
        let u = lamperti_inverse(&b, HurstParam::new(h).unwrap()).unwrap();
        assert_eq!(x.times(), u.times());
        for (a, c) in x.values().iter().zip(u.values()) {
            assert!((a - c).abs() <= 1e-14 * c.abs().max(1.0));
        }
        assert!((second_kind_time_change(h, h, 1.3) - 1.3f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn second_kind_matches_integral_representation() {
        let h = 0.6;
        let theta = 1.5;
        let out = Arc::new(TimeGrid::uniform(0.0, 2.0, 1e-3).unwrap());
        let gen = StationaryLangevin::new(theta, out, 40.0 / theta, |g| {
            Ok(Box::new(SecondKindNoise::new(h, g)?) as Box<dyn PathGenerator + Send>)
        })
        .unwrap();
        let noise = SecondKindNoise::new(h, gen.noise_grid().clone()).unwrap();
        let mut rng = StreamSeed::new(8, 0).rng();
        let (z, y) = noise.sample_parts(&mut rng).unwrap();
        let s = stationary_solution(&y, theta, 1e-12).unwrap();
        let x = second_kind_integral_representation(&z, theta).unwrap();
        for &t in &[0.0, 0.5, 1.0, 2.0] {
            let lhs = x.at(t).unwrap();
            let rhs = (theta * t).exp() * s.solution.path.at(t).unwrap();
            assert!((lhs - rhs).abs() < 1e-3 * (1.0 + rhs.abs()), "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn classical_ou_variance() {
        let theta = 1.0;
        let out = Arc::new(TimeGrid::uniform(0.0, 1.0, 0.01).unwrap());
        let n = 4000;
        let ens = Ensemble::generate(&ornstein_uhlenbeck(theta, out).unwrap(), 3, n).unwrap();
        let v = sample_variance(&ens.column(0.0).unwrap());
        let se = 0.5 * (2.0 / n as f64).sqrt();
        assert!((v - 0.5).abs() < 4.0 * se, "{v}");
    }
}
