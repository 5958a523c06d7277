//! Pathwise integrals `∫ e^{Hu} dX_u` of continuous sample paths.
//!
//! For a continuous path the integral is defined by integration by parts,
//!
//! ```text
//! ∫_s^t e^{Hu} dX_u = e^{Ht} X_t − e^{Hs} X_s − H ∫_s^t X_u e^{Hu} du,
//! ```
//!
//! with the last integral understood in the Riemann sense. On a grid the path
//! is only known at the nodes, and two quadratures are offered for the
//! Riemann term:
//!
//! * [`Quadrature::Linear`] integrates the piecewise-linear interpolant of the
//!   path exactly. Cell by cell this is
//!   `ΔX · e^{Ha} · (e^{HΔ} − 1) / (HΔ)`. It is exact for paths that are
//!   linear between nodes and is the discretization the Langevin solver and
//!   the noise extractor share, which makes them exact inverses on a grid.
//! * [`Quadrature::Trapezoid`] applies the trapezoid rule to `X_u e^{Hu}`.
//!
//! Both are second order for smooth paths.

use crate::error::{Error, Result};

use super::path::{interpolate, SamplePath};

/// Quadrature used for the Riemann correction term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    #[default]
    Linear,
    Trapezoid,
}

/// `(e^r − 1) / r`, continuous at `r = 0`.
#[inline]
pub fn exprel(r: f64) -> f64 {
    if r.abs() < 1e-8 {
        1.0 + 0.5 * r
    } else {
        r.exp_m1() / r
    }
}

/// `∫_s^t e^{Hu} dX_u` with the default quadrature.
pub fn exp_weighted_integral(x: &SamplePath, h: f64, s: f64, t: f64) -> Result<f64> {
    exp_weighted_integral_with(x, h, s, t, Quadrature::Linear)
}

/// `∫_s^t e^{Hu} dX_u`. Off-grid end points are handled by linear
/// interpolation; for `t < s` the result is `−∫_t^s`.
pub fn exp_weighted_integral_with(
    x: &SamplePath,
    h: f64,
    s: f64,
    t: f64,
    quadrature: Quadrature,
) -> Result<f64> {
    if !h.is_finite() {
        return Err(Error::Data(format!("weight rate must be finite, got {h}")));
    }
    if t < s {
        return exp_weighted_integral_with(x, h, t, s, quadrature).map(|v| -v);
    }
    let grid = x.grid();
    let (lo, wl) = grid.bracket(s)?;
    let (hi, wh) = grid.bracket(t)?;
    let v = x.values();
    let p = grid.points();
    let xs = interpolate(v[lo], v[lo + 1], wl);
    let xt = interpolate(v[hi], v[hi + 1], wh);
    if h == 0.0 || s == t {
        return Ok(if s == t { 0.0 } else { xt - xs });
    }

    // Nodes: s, the grid points strictly inside (s, t), then t.
    let inner = (lo + 1..=hi + 1).filter(|&k| p[k] > s && p[k] < t);
    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(hi + 3 - lo);
    nodes.push((s, xs));
    nodes.extend(inner.map(|k| (p[k], v[k])));
    nodes.push((t, xt));

    let value = match quadrature {
        Quadrature::Linear => nodes
            .windows(2)
            .map(|w| {
                let (a, xa) = w[0];
                let (b, xb) = w[1];
                (xb - xa) * (h * a).exp() * exprel(h * (b - a))
            })
            .sum(),
        Quadrature::Trapezoid => {
            let riemann: f64 = nodes
                .windows(2)
                .map(|w| {
                    let (a, xa) = w[0];
                    let (b, xb) = w[1];
                    0.5 * (xa * (h * a).exp() + xb * (h * b).exp()) * (b - a)
                })
                .sum();
            (h * t).exp() * xt - (h * s).exp() * xs - h * riemann
        }
    };
    if !value.is_finite() {
        return Err(Error::Data(format!(
            "integral over [{s}, {t}] with rate {h} is not finite"
        )));
    }
    Ok(value)
}

/// Cumulative `∫_anchor^{t_k} e^{Hu} dX_u` at every grid point (negative for
/// points before the anchor), with the default quadrature.
pub fn cumulative_exp_integral(x: &SamplePath, h: f64, anchor: f64) -> Result<Vec<f64>> {
    let a = x.grid().locate(anchor)?;
    let p = x.times();
    let v = x.values();
    let cell = |k: usize| (v[k + 1] - v[k]) * (h * p[k]).exp() * exprel(h * (p[k + 1] - p[k]));
    let mut out = vec![0.0; x.len()];
    for k in a..x.len() - 1 {
        out[k + 1] = out[k] + cell(k);
    }
    for k in (0..a).rev() {
        out[k] = out[k + 1] - cell(k);
    }
    Ok(out)
}

/// Result of truncating `∫_{−∞}^t e^{Hu} dG_u` at a finite horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct ImproperIntegral {
    pub value: f64,
    pub converged: bool,
    /// Horizon `T` of the truncation `∫_{t−T}^t` that produced `value`.
    pub horizon: f64,
    /// `(T, ∫_{t−T}^t)` for every horizon tried.
    pub trace: Vec<(f64, f64)>,
}

/// Options for the horizon-doubling scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoublingOptions {
    pub initial_horizon: f64,
}

impl Default for DoublingOptions {
    fn default() -> Self {
        Self {
            initial_horizon: 1.0,
        }
    }
}

/// Approximates `∫_{−∞}^t e^{Hu} dG_u` by `∫_{t−T}^t`, doubling `T` until two
/// consecutive horizons agree to `tol`. The largest horizon is the available
/// history `t − start`. Running out of history is reported through
/// `converged = false`, not as an error.
pub fn improper_exp_integral(g: &SamplePath, h: f64, t: f64, tol: f64) -> Result<ImproperIntegral> {
    improper_exp_integral_with(g, h, t, tol, DoublingOptions::default())
}

pub fn improper_exp_integral_with(
    g: &SamplePath,
    h: f64,
    t: f64,
    tol: f64,
    options: DoublingOptions,
) -> Result<ImproperIntegral> {
    if !(h > 0.0) {
        return Err(Error::Parameter {
            name: "H",
            reason: format!("must be positive, got {h}"),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    g.grid().locate(t)?;
    let max_horizon = t - g.grid().start();
    let horizons = doubling_horizons(options.initial_horizon, max_horizon);
    let mut trace = Vec::with_capacity(horizons.len());
    for &horizon in &horizons {
        let value = exp_weighted_integral(g, h, t - horizon, t)?;
        trace.push((horizon, value));
        if let [.., (_, prev), (_, last)] = trace.as_slice() {
            if (last - prev).abs() < tol {
                return Ok(ImproperIntegral {
                    value: *last,
                    converged: true,
                    horizon,
                    trace,
                });
            }
        }
    }
    let &(horizon, value) = trace.last().expect("at least one horizon");
    Ok(ImproperIntegral {
        value,
        converged: false,
        horizon,
        trace,
    })
}

/// `T0, 2T0, 4T0, ...` capped by (and ending at) `max_horizon`.
fn doubling_horizons(initial: f64, max_horizon: f64) -> Vec<f64> {
    if !(max_horizon > 0.0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut t = initial.min(max_horizon);
    while t < max_horizon {
        out.push(t);
        t *= 2.0;
    }
    out.push(max_horizon);
    out
}

/// A noise path with history before time zero, viewed through the two
/// quantities that decide whether `∫_{−∞}^0 e^{Hu} dG_u` exists.
pub trait NoiseHistory {
    /// Length of the history available before time zero.
    fn history_span(&self) -> f64;

    /// `G_0`, which must vanish for a member of the class.
    fn origin_value(&self) -> Result<f64>;

    /// Smallest horizon that resolves at least a few samples.
    fn resolution(&self) -> f64;

    /// `∫_{−T}^0 e^{Hu} dG_u`; may be infinite when it overflows.
    fn tail_integral(&self, rate: f64, horizon: f64) -> Result<f64>;

    /// `max e^{−H u} |G_{−u}|` over `u ∈ [lo, hi]`; may be infinite.
    fn weighted_size(&self, rate: f64, lo: f64, hi: f64) -> Result<f64>;

    /// Grid increments in time order, used for increment-law checks. Only
    /// their order matters, so an implementation may return any strictly
    /// increasing transform of them.
    fn increments(&self) -> Vec<f64>;
}

impl NoiseHistory for SamplePath {
    fn history_span(&self) -> f64 {
        (-self.grid().start()).max(0.0)
    }

    fn origin_value(&self) -> Result<f64> {
        self.at(0.0)
    }

    fn resolution(&self) -> f64 {
        let p = self.times();
        4.0 * (p[1] - p[0])
    }

    fn tail_integral(&self, rate: f64, horizon: f64) -> Result<f64> {
        exp_weighted_integral(self, rate, -horizon, 0.0)
    }

    fn weighted_size(&self, rate: f64, lo: f64, hi: f64) -> Result<f64> {
        let p = self.times();
        let v = self.values();
        let size = p
            .iter()
            .zip(v)
            .filter(|(&t, _)| -t >= lo && -t <= hi)
            .map(|(&t, &g)| (rate * t).exp() * g.abs())
            .fold(0.0, f64::max);
        Ok(size)
    }

    fn increments(&self) -> Vec<f64> {
        self.values().windows(2).map(|w| w[1] - w[0]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path_core::TimeGrid;
    use std::sync::Arc;

    fn path(start: f64, stop: f64, step: f64, f: impl Fn(f64) -> f64) -> SamplePath {
        SamplePath::from_fn(Arc::new(TimeGrid::uniform(start, stop, step).unwrap()), f).unwrap()
    }

    #[test]
    fn identity_path_gives_e_minus_one() {
        let x = path(0.0, 1.0, 1e-4, |u| u);
        let e1 = std::f64::consts::E - 1.0;
        for q in [Quadrature::Linear, Quadrature::Trapezoid] {
            let v = exp_weighted_integral_with(&x, 1.0, 0.0, 1.0, q).unwrap();
            assert!((v - e1).abs() < 1e-6, "{q:?}: {v}");
        }
    }

    #[test]
    fn zero_rate_is_plain_increment() {
        let x = path(0.0, 2.0, 0.01, |u| (3.0 * u).sin() + u * u);
        let v = exp_weighted_integral(&x, 0.0, 0.3, 1.7).unwrap();
        assert_eq!(v, x.at(1.7).unwrap() - x.at(0.3).unwrap());
    }

    #[test]
    fn constant_path_integrates_to_zero() {
        let x = path(-3.0, 2.0, 0.01, |_| 4.25);
        assert_eq!(exp_weighted_integral(&x, 1.3, -2.0, 1.5).unwrap(), 0.0);
    }

    #[test]
    fn reversed_limits_negate_exactly() {
        let x = path(0.0, 2.0, 0.01, |u| (5.0 * u).cos());
        let a = exp_weighted_integral(&x, 0.7, 0.2, 1.9).unwrap();
        let b = exp_weighted_integral(&x, 0.7, 1.9, 0.2).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn off_grid_limits_are_interpolated() {
        let x = path(0.0, 1.0, 0.1, |u| u);
        // Linear path: exact for any limits.
        let v = exp_weighted_integral(&x, 2.0, 0.05, 0.93).unwrap();
        let exact = ((2.0f64 * 0.93).exp() - (2.0f64 * 0.05).exp()) / 2.0;
        assert!((v - exact).abs() < 1e-14);
        assert!(matches!(
            exp_weighted_integral(&x, 1.0, -0.5, 0.5),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn cumulative_matches_direct() {
        let x = path(-1.0, 1.0, 0.05, |u| (2.0 * u).sin());
        let c = cumulative_exp_integral(&x, 0.8, 0.0).unwrap();
        for (k, &t) in x.times().iter().enumerate() {
            let d = exp_weighted_integral(&x, 0.8, 0.0, t).unwrap();
            assert!((c[k] - d).abs() < 1e-13, "t={t}: {} vs {d}", c[k]);
        }
    }

    #[test]
    fn improper_integral_of_drift() {
        let g = path(-40.0, 0.0, 1e-3, |u| u);
        let r = improper_exp_integral(&g, 2.0, 0.0, 1e-9).unwrap();
        assert!(r.converged);
        assert!((r.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn improper_integral_of_zero_converges_immediately() {
        let g = path(-10.0, 0.0, 0.01, |_| 0.0);
        let r = improper_exp_integral(&g, 1.0, 0.0, 1e-6).unwrap();
        assert!(r.converged);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.trace.len(), 2);
        assert_eq!(r.horizon, 2.0);
    }

    #[test]
    fn short_history_is_flagged_not_raised() {
        let g = path(-1.5, 0.0, 0.01, |u| u);
        let r = improper_exp_integral(&g, 0.25, 0.0, 1e-9).unwrap();
        assert!(!r.converged);
        assert_eq!(r.horizon, 1.5);
    }

    #[test]
    fn doubling_sequence() {
        assert_eq!(doubling_horizons(1.0, 5.0), vec![1.0, 2.0, 4.0, 5.0]);
        assert_eq!(doubling_horizons(1.0, 4.0), vec![1.0, 2.0, 4.0]);
        assert_eq!(doubling_horizons(1.0, 0.5), vec![0.5]);
    }

    #[test]
    fn exprel_is_smooth_at_zero() {
        assert_eq!(exprel(0.0), 1.0);
        assert!((exprel(1e-9) - 1.0).abs() < 1e-8);
        assert!((exprel(1.0) - (std::f64::consts::E - 1.0)).abs() < 1e-15);
    }
}
