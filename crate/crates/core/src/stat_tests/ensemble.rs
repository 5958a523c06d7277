use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::path_core::Ensemble;

use super::ks::{halves, ks_family};
use super::report::TestReport;

fn columns(ens: &Ensemble, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    times.iter().map(|&t| ens.column(t)).collect()
}

fn pick(values: &[f64], range: &std::ops::Range<usize>) -> Vec<f64> {
    values[range.clone()].to_vec()
}

/// Checks `U_{t+shift} =law U_t` across the ensemble.
///
/// The first half of the paths supplies samples at `base`, the second half at
/// `base + shift`, so each comparison is between independent samples. Lag `0`
/// compares marginals; a positive lag `ℓ` compares the pairs
/// `(U_t, U_{t+ℓ})` through their difference and their sum.
pub fn test_stationarity(ens: &Ensemble, base: f64, lags: &[f64], shift: f64) -> Result<TestReport> {
    stationarity_family("stationarity", ens, base, lags, shift, false)
}

/// Checks that increments `X_{t+ℓ} − X_t` have the same law at `t = base`
/// and `t = base + shift`, for every lag `ℓ > 0`.
pub fn test_increment_stationarity(
    ens: &Ensemble,
    base: f64,
    lags: &[f64],
    shift: f64,
) -> Result<TestReport> {
    stationarity_family("increment_stationarity", ens, base, lags, shift, true)
}

fn stationarity_family(
    name: &str,
    ens: &Ensemble,
    base: f64,
    lags: &[f64],
    shift: f64,
    increments_only: bool,
) -> Result<TestReport> {
    if lags.is_empty() {
        return Err(param("lags", "need at least one lag"));
    }
    if lags.iter().any(|&l| !(l >= 0.0)) || (increments_only && lags.iter().any(|&l| l == 0.0)) {
        return Err(param("lags", format!("invalid lags {lags:?}")));
    }
    let (first, second) = halves(ens.len());
    let a0 = ens.column(base)?;
    let b0 = ens.column(base + shift)?;
    let mut pairs = Vec::new();
    for &lag in lags {
        if lag == 0.0 {
            pairs.push(("lag 0".to_string(), pick(&a0, &first), pick(&b0, &second)));
            continue;
        }
        let a1 = ens.column(base + lag)?;
        let b1 = ens.column(base + shift + lag)?;
        let diff = |x: &[f64], y: &[f64], r: &std::ops::Range<usize>| {
            r.clone().map(|i| y[i] - x[i]).collect::<Vec<_>>()
        };
        let sum = |x: &[f64], y: &[f64], r: &std::ops::Range<usize>| {
            r.clone().map(|i| y[i] + x[i]).collect::<Vec<_>>()
        };
        pairs.push((
            format!("lag {lag} difference"),
            diff(&a0, &a1, &first),
            diff(&b0, &b1, &second),
        ));
        if !increments_only {
            pairs.push((format!("lag {lag} sum"), sum(&a0, &a1, &first), sum(&b0, &b1, &second)));
        }
    }
    let mut report = ks_family(name, pairs)?;
    report.add_detail("base", base);
    report.add_detail("shift", shift);
    report.add_detail("lags", lags.to_vec());
    Ok(report)
}

/// Checks `a^{−H} X_{at} =law X_t` across the ensemble at each of `times`
/// (at least two), with halves of the ensemble on either side.
pub fn test_self_similarity(ens: &Ensemble, h: f64, a: f64, times: &[f64]) -> Result<TestReport> {
    if times.len() < 2 {
        return Err(param("times", "self-similarity is tested at two or more times"));
    }
    if !(a > 0.0) || !h.is_finite() {
        return Err(param("a", format!("need a > 0 and finite H, got a = {a}, H = {h}")));
    }
    let (first, second) = halves(ens.len());
    let scale = a.powf(-h);
    let mut pairs = Vec::new();
    for &t in times {
        let scaled: Vec<f64> = ens.column(a * t)?.iter().map(|v| scale * v).collect();
        let plain = ens.column(t)?;
        pairs.push((format!("t = {t}"), pick(&scaled, &first), pick(&plain, &second)));
    }
    let mut report = ks_family("self_similarity", pairs)?;
    report.add_detail("H", h);
    report.add_detail("a", a);
    report.add_detail("times", times.to_vec());
    Ok(report)
}

/// Across-ensemble covariance estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Autocovariance {
    pub lag: f64,
    pub value: f64,
    pub std_error: f64,
}

/// `Cov(U_base, U_{base+lag})` across the paths, for each lag.
pub fn empirical_autocovariance(ens: &Ensemble, base: f64, lags: &[f64]) -> Result<Vec<Autocovariance>> {
    if ens.len() < 2 {
        return Err(Error::Data("need at least two paths".into()));
    }
    let x = ens.column(base)?;
    let ys = columns(ens, &lags.iter().map(|l| base + l).collect::<Vec<_>>())?;
    Ok(lags
        .iter()
        .zip(ys)
        .map(|(&lag, y)| {
            let (value, std_error) = covariance(&x, &y);
            Autocovariance {
                lag,
                value,
                std_error,
            }
        })
        .collect())
}

/// Unbiased sample variance, the same estimator as the lag-0 autocovariance.
pub fn sample_variance(x: &[f64]) -> f64 {
    covariance(x, x).0
}

/// Unbiased sample covariance and the standard error of the mean of the
/// centered products.
pub fn covariance(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let products: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let sum: f64 = products.iter().sum();
    let value = sum / (n - 1.0);
    let mean = sum / n;
    let spread = products.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (value, (spread / n).sqrt())
}

/// Lag-`k` sample autocorrelation of a single series.
pub fn series_autocorrelation(x: &[f64], k: usize) -> f64 {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let denom: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    if denom == 0.0 || k >= n {
        return 0.0;
    }
    let num: f64 = (0..n - k).map(|i| (x[i] - mean) * (x[i + k] - mean)).sum();
    num / denom
}
