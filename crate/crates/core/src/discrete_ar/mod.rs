//! Discrete-time counterpart of the Langevin representation.
//!
//! A stationary sequence `U_n` is written as
//! `U_n = Σ_{k ≤ n} e^{−H(n−k)} ΔG_k`, which is the same as the AR(1)
//! recursion `U_n = e^{−H} U_{n−1} + ΔG_n` with an increment sequence that is
//! stationary but in general not independent.

mod arma;
mod series;

pub use arma::{simulate_arma, simulate_ma_truncated, ArmaSpec};
pub use series::DiscreteSeries;

use crate::error::{param, Error, Result};

/// Default truncation depth `ceil(40 / H)`: the neglected weight `e^{−HK}`
/// is then below `e^{−40}`.
pub fn default_depth(h: f64) -> usize {
    (40.0 / h).ceil() as usize
}

/// Stationary solution on indices `0..=end`, and the size of what the
/// truncation left out.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSolution {
    pub series: DiscreteSeries,
    /// Truncation depth `K`: the sum starts at index `−K`.
    pub depth: usize,
    /// `e^{−HK} · max_n |U_n|`. The neglected tail at time `n` is exactly
    /// `e^{−H(n+K+1)}` times the untruncated solution at index `−K−1`, so
    /// this is of the order of the worst omitted term.
    pub truncation_bound: f64,
}

/// `U_n = e^{−Hn} Σ_{k=−K}^n e^{Hk} ΔG_k` for `n = 0..=end` of `dg`.
pub fn discrete_stationary_solution(
    dg: &DiscreteSeries,
    h: f64,
    depth: usize,
) -> Result<DiscreteSolution> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(param("H", format!("must be positive, got {h}")));
    }
    let first = -(depth as i64);
    if dg.start() > first {
        return Err(Error::Precondition(format!(
            "truncation depth {depth} needs increments from index {first}, history starts at {}",
            dg.start()
        )));
    }
    if dg.end() < 0 {
        return Err(Error::Precondition(format!(
            "increments end at {} before index 0",
            dg.end()
        )));
    }
    let decay = (-h).exp();
    let mut u = 0.0;
    let mut out = Vec::with_capacity(dg.end() as usize + 1);
    for (n, &d) in dg.indices().zip(dg.values()).skip_while(|(n, _)| *n < first) {
        u = decay * u + d;
        if n >= 0 {
            out.push(u);
        }
    }
    let max_abs = out.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(DiscreteSolution {
        series: DiscreteSeries::new(0, out)?,
        depth,
        truncation_bound: (-h * depth as f64).exp() * max_abs,
    })
}

/// `max_n |Δ_n U − (e^{−H} − 1) U_{n−1} − ΔG_n|` over the indices of `u`
/// after the first. Evaluated as `(U_n − e^{−H} U_{n−1}) − ΔG_n`, the same
/// expression the noise extraction uses, so an extracted noise gives exactly
/// zero.
pub fn ar1_residual(u: &DiscreteSeries, dg: &DiscreteSeries, h: f64) -> Result<f64> {
    if u.len() < 2 {
        return Err(Error::Data("need at least two values".into()));
    }
    let first = u.start() + 1;
    if dg.start() > first || dg.end() < u.end() {
        return Err(Error::Misaligned(format!(
            "increments cover {}..={}, residual needs {first}..={}",
            dg.start(),
            dg.end(),
            u.end()
        )));
    }
    let decay = (-h).exp();
    let dg = dg.window(first, u.end())?;
    let worst = u
        .values()
        .windows(2)
        .zip(dg.values())
        .map(|(w, d)| ((w[1] - decay * w[0]) - d).abs())
        .fold(0.0, f64::max);
    Ok(worst)
}

/// `ΔG_n = U_n − e^{−H} U_{n−1}` on indices `start+1..=end`.
pub fn extract_discrete_noise(u: &DiscreteSeries, h: f64) -> Result<DiscreteSeries> {
    if u.len() < 2 {
        return Err(Error::Data("need at least two values".into()));
    }
    let decay = (-h).exp();
    let values = u.values().windows(2).map(|w| w[1] - decay * w[0]).collect();
    DiscreteSeries::new(u.start() + 1, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path_core::StreamSeed;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn normals(start: i64, n: usize, seed: u64) -> DiscreteSeries {
        let mut rng = StreamSeed::new(seed, 0).rng();
        DiscreteSeries::new(start, (0..n).map(|_| rng.sample(StandardNormal)).collect()).unwrap()
    }

    #[test]
    fn zero_increments_give_zero() {
        let dg = DiscreteSeries::new(-50, vec![0.0; 100]).unwrap();
        let s = discrete_stationary_solution(&dg, 1.0, 40).unwrap();
        assert!(s.series.values().iter().all(|&v| v == 0.0));
        assert_eq!(s.series.start(), 0);
        assert_eq!(s.series.end(), 49);
    }

    #[test]
    fn constant_increments_sum_to_geometric_series() {
        let h = 0.5;
        let d = 1.7;
        let k = default_depth(h);
        let dg = DiscreteSeries::new(-(k as i64), vec![d; k + 20]).unwrap();
        let s = discrete_stationary_solution(&dg, h, k).unwrap();
        let limit = d / (1.0 - (-h).exp());
        for v in s.series.values() {
            assert!((v - limit).abs() < 1e-12 * limit, "{v} vs {limit}");
        }
        assert!(s.truncation_bound < 1e-8 * limit);
    }

    #[test]
    fn insufficient_history_is_rejected() {
        let dg = DiscreteSeries::new(-10, vec![0.0; 30]).unwrap();
        assert!(matches!(
            discrete_stationary_solution(&dg, 1.0, 40),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn solution_satisfies_the_recursion() {
        for h in [0.25, 1.0, 2.0] {
            let k = default_depth(h);
            let dg = normals(-(k as i64), k + 5000, 3);
            let s = discrete_stationary_solution(&dg, h, k).unwrap();
            let r = ar1_residual(&s.series, &dg, h).unwrap();
            assert!(r < 1e-12, "H={h}: residual {r}");
        }
    }

    #[test]
    fn residual_of_zero_and_sensitivity() {
        let u = DiscreteSeries::new(0, vec![0.0; 10]).unwrap();
        let dg = DiscreteSeries::new(1, vec![0.0; 9]).unwrap();
        assert_eq!(ar1_residual(&u, &dg, 1.0).unwrap(), 0.0);

        let base = normals(0, 200, 9);
        let dg = extract_discrete_noise(&base, 0.7).unwrap();
        let eps = 1e-3;
        let mut bumped = base.values().to_vec();
        bumped[100] += eps;
        let bumped = DiscreteSeries::new(0, bumped).unwrap();
        let r = ar1_residual(&bumped, &dg, 0.7).unwrap();
        assert!(r >= eps * (1.0 - 1e-9), "{r}");
    }

    #[test]
    fn misaligned_residual_is_an_error() {
        let u = normals(0, 10, 1);
        let dg = normals(5, 10, 2);
        assert!(matches!(ar1_residual(&u, &dg, 1.0), Err(Error::Misaligned(_))));
    }

    #[test]
    fn extraction_examples() {
        let h = 0.8;
        let c = 2.5;
        let u = DiscreteSeries::new(0, vec![c; 20]).unwrap();
        let dg = extract_discrete_noise(&u, h).unwrap();
        for d in dg.values() {
            assert!((d - c * (1.0 - (-h).exp())).abs() < 1e-15);
        }
        assert_eq!(ar1_residual(&u, &dg, h).unwrap(), 0.0);

        // An AR(1) with coefficient e^{-H} gives back its innovations.
        let eps = normals(1, 500, 4);
        let mut values = vec![0.3];
        for e in eps.values() {
            let prev = *values.last().unwrap();
            values.push((-h).exp() * prev + e);
        }
        let u = DiscreteSeries::new(0, values).unwrap();
        let dg = extract_discrete_noise(&u, h).unwrap();
        assert_eq!(dg.start(), 1);
        for (a, b) in dg.values().iter().zip(eps.values()) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
