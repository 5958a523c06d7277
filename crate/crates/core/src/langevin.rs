//! The Langevin equation `dU_t = −H U_t dt + dG_t`.
//!
//! Its solution from `U_0` is `U_t = e^{−Ht}(U_0 + ∫_0^t e^{Hs} dG_s)`, and for
//! a noise with a long enough history the stationary solution is
//! `U_t = e^{−Ht} ∫_{−∞}^t e^{Hs} dG_s`. Conversely a stationary `U`
//! determines its noise uniquely through `G_t = U_t − U_0 + H ∫_0^t U_s ds`.
//!
//! On a grid the solver advances cell by cell with the exact update for a
//! noise that is linear inside the cell,
//!
//! ```text
//! U_{k+1} = e^{−r} U_k + ΔG_k (1 − e^{−r}) / r,    r = H (t_{k+1} − t_k),
//! ```
//!
//! which is the cumulative [`exp_weighted_integral`] written recursively. The
//! noise extractor inverts this update, so extraction followed by solving
//! reproduces the input up to rounding.

use crate::error::{param, Error, Result};
use crate::path_core::{
    exp_weighted_integral, exprel, improper_exp_integral, HurstParam, ImproperIntegral,
    NoiseHistory, SamplePath,
};
use crate::stat_tests::{all_of, ks_two_sample, test_gh_membership, TestReport, MIN_KS_SAMPLES};

/// Default tolerance for the truncated improper integral.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default burn-in `40 / H`, after which `e^{−HT}` is below `e^{−40}`.
pub fn default_burn_in(h: f64) -> f64 {
    40.0 / h
}

/// A solution path together with the data that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct LangevinSolution {
    pub path: SamplePath,
    pub h: HurstParam,
    /// `U_0`.
    pub initial: f64,
    /// Free-form label of the noise path used.
    pub noise_ref: String,
}

impl LangevinSolution {
    pub fn with_noise_ref(mut self, noise_ref: impl Into<String>) -> Self {
        self.noise_ref = noise_ref.into();
        self
    }
}

/// Stationary solution and the diagnostics of the truncated integral that
/// set its initial value.
#[derive(Debug, Clone, PartialEq)]
pub struct StationarySolution {
    pub solution: LangevinSolution,
    pub integral: ImproperIntegral,
}

impl StationarySolution {
    pub fn converged(&self) -> bool {
        self.integral.converged
    }
}

/// `(1 − e^{−r}) / r`: response of one step to a unit noise increment.
#[inline]
fn gain(r: f64) -> f64 {
    exprel(-r)
}

fn positive_rate(h: f64) -> Result<HurstParam> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(param("H", format!("must be positive, got {h}")));
    }
    HurstParam::new(h)
}

/// Solves on the whole grid of `g` with `U = u_anchor` at the grid point
/// `anchor`, stepping forward and backward from there.
pub fn solve_from(g: &SamplePath, h: f64, anchor: f64, u_anchor: f64) -> Result<SamplePath> {
    positive_rate(h)?;
    if !u_anchor.is_finite() {
        return Err(Error::Data(format!("initial value must be finite, got {u_anchor}")));
    }
    let a = g.grid().locate(anchor)?;
    let p = g.times();
    let v = g.values();
    let mut u = vec![0.0; g.len()];
    u[a] = u_anchor;
    for k in a + 1..g.len() {
        let r = h * (p[k] - p[k - 1]);
        u[k] = (-r).exp() * u[k - 1] + (v[k] - v[k - 1]) * gain(r);
    }
    for k in (1..=a).rev() {
        let r = h * (p[k] - p[k - 1]);
        u[k - 1] = r.exp() * (u[k] - (v[k] - v[k - 1]) * gain(r));
    }
    g.with_values(u)
}

/// `U_t = e^{−Ht}(U_0 + ∫_0^t e^{Hs} dG_s)` on the grid of `g`, which must
/// contain `0` with `G_0 = 0`.
pub fn solve_forward(g: &SamplePath, h: f64, u0: f64) -> Result<LangevinSolution> {
    let hp = positive_rate(h)?;
    let g0 = g.at(0.0)?;
    if g0 != 0.0 {
        return Err(Error::Precondition(format!("noise must vanish at time 0, got {g0}")));
    }
    Ok(LangevinSolution {
        path: solve_from(g, h, 0.0, u0)?,
        h: hp,
        initial: u0,
        noise_ref: String::new(),
    })
}

/// `U_t = e^{−Ht} ∫_{−∞}^t e^{Hs} dG_s` on the non-negative part `[0, b]` of
/// the grid of `g`. The negative-time part of `g` is the burn-in. A value
/// whose truncated integral did not converge is returned all the same, with
/// `integral.converged == false`.
pub fn stationary_solution(g: &SamplePath, h: f64, tol: f64) -> Result<StationarySolution> {
    positive_rate(h)?;
    if g.grid().end() <= 0.0 {
        return Err(Error::Precondition("noise grid must extend past time 0".into()));
    }
    let integral = improper_exp_integral(g, h, 0.0, tol)?;
    let n0 = g.grid().locate(0.0)?;
    let forward = g.restrict(g.times()[n0], g.grid().end())?;
    let solution = solve_forward(&forward, h, integral.value)?;
    Ok(StationarySolution { solution, integral })
}

/// The noise of a path: `G_0 = 0` and, cell by cell, the `ΔG` that makes the
/// solver step reproduce `U`. The grid must contain `0`.
pub fn extract_noise(u: &SamplePath, h: f64) -> Result<SamplePath> {
    positive_rate(h)?;
    let a = u.grid().locate(0.0)?;
    let p = u.times();
    let v = u.values();
    let increment = |k: usize| {
        let r = h * (p[k] - p[k - 1]);
        (v[k] - (-r).exp() * v[k - 1]) / gain(r)
    };
    let mut g = vec![0.0; u.len()];
    for k in a + 1..u.len() {
        g[k] = g[k - 1] + increment(k);
    }
    for k in (1..=a).rev() {
        g[k - 1] = g[k] - increment(k);
    }
    u.with_values(g)
}

/// `G_t = U_t − U_0 + H ∫_0^t U_s ds` with the trapezoid rule.
pub fn extract_noise_residual(u: &SamplePath, h: f64) -> Result<SamplePath> {
    positive_rate(h)?;
    let a = u.grid().locate(0.0)?;
    let p = u.times();
    let v = u.values();
    let mut area = vec![0.0; u.len()];
    for k in a + 1..u.len() {
        area[k] = area[k - 1] + 0.5 * (v[k] + v[k - 1]) * (p[k] - p[k - 1]);
    }
    for k in (1..=a).rev() {
        area[k - 1] = area[k] - 0.5 * (v[k] + v[k - 1]) * (p[k] - p[k - 1]);
    }
    let g = v.iter().zip(&area).map(|(x, s)| x - v[a] + h * s).collect();
    u.with_values(g)
}

/// `Y_t = ∫_0^t e^{−Hs} dZ_s` with `Z_s = e^{Hs} U_s`, the noise written as
/// a weighted integral of the self-similar process in logarithmic time.
pub fn extract_noise_lamperti(u: &SamplePath, h: f64) -> Result<SamplePath> {
    positive_rate(h)?;
    let z = u.with_values(
        u.times()
            .iter()
            .zip(u.values())
            .map(|(&t, &x)| (h * t).exp() * x)
            .collect(),
    )?;
    let y = crate::path_core::cumulative_exp_integral(&z, -h, 0.0)?;
    u.with_values(y)
}

/// Per-step residuals `ΔU + H·(U_k + U_{k+1})/2·Δt − ΔG` of the equation on
/// the grid shared by `u` and `g`.
pub fn langevin_residuals(u: &SamplePath, g: &SamplePath, h: f64) -> Result<Vec<f64>> {
    if u.grid() != g.grid() && u.times() != g.times() {
        return Err(Error::Misaligned("solution and noise live on different grids".into()));
    }
    let p = u.times();
    let x = u.values();
    let y = g.values();
    Ok((1..u.len())
        .map(|k| {
            let dt = p[k] - p[k - 1];
            (x[k] - x[k - 1]) + h * 0.5 * (x[k] + x[k - 1]) * dt - (y[k] - y[k - 1])
        })
        .collect())
}

/// `e^{−Ht}(U_0 + ∫_0^t e^{Hs} dG_s)` at a single time, evaluated directly
/// from the integral rather than by stepping.
pub fn solution_at(g: &SamplePath, h: f64, u0: f64, t: f64) -> Result<f64> {
    Ok((-h * t).exp() * (u0 + exp_weighted_integral(g, h, 0.0, t)?))
}

/// Checks that a noise history belongs to the class for which a stationary
/// solution exists: the truncated integrals `∫_{−T}^0 e^{Hu} dG_u` settle
/// and `e^{−Hu}|G_{−u}|` decays (see [`test_gh_membership`]), and the older
/// and newer halves of the increment sequence agree in law by a KS test.
///
/// The increment comparison runs along a single path, so it is exact only
/// for independent increments; for dependent increments it is indicative.
pub fn verify_gh_noise<G: NoiseHistory + ?Sized>(g: &G, h: f64, tol: f64) -> Result<TestReport> {
    let g0 = g.origin_value()?;
    if g0 != 0.0 {
        return Err(Error::Precondition(format!("noise must vanish at time 0, got {g0}")));
    }
    let membership = test_gh_membership(g, h, tol)?;
    // Grid rounding makes nominally equal increments differ in the last bits,
    // which KS would see; quantize far below any meaningful scale.
    let raw = g.increments();
    let scale = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let quantum = 1e-12 * scale;
    let inc: Vec<f64> = if quantum > 0.0 && quantum.is_finite() {
        raw.iter().map(|v| (v / quantum).round() * quantum).collect()
    } else {
        raw
    };
    let half = inc.len() / 2;
    if half < MIN_KS_SAMPLES {
        return Err(Error::Size(format!(
            "increment check needs at least {} increments, got {}",
            2 * MIN_KS_SAMPLES,
            inc.len()
        )));
    }
    let mut increments = ks_two_sample(&inc[..half], &inc[half..2 * half])?;
    increments.name = "increment_stationarity_along_path".into();
    increments.add_detail(
        "note",
        "older vs newer half of one path; exact for independent increments only",
    );
    Ok(all_of("gh_noise", vec![membership, increments]).with_detail("H", h))
}
