use crate::error::{param, Error, Result};

use super::report::TestReport;

/// Significance level of every distributional test.
pub const SIGNIFICANCE: f64 = 0.01;

/// Smallest sample accepted by the KS-based tests; below this the asymptotic
/// critical values are not trusted.
pub const MIN_KS_SAMPLES: usize = 500;

/// Asymptotic critical value `c(α) = sqrt(−ln(α/2) / 2)`.
pub fn ks_critical_value(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// Rejection threshold for the two-sample statistic with sizes `m`, `n`.
pub fn ks_threshold(m: usize, n: usize, alpha: f64) -> f64 {
    let (m, n) = (m as f64, n as f64);
    ks_critical_value(alpha) * ((m + n) / (m * n)).sqrt()
}

/// `sup_x |F_a(x) − F_b(x)|` of the two empirical distribution functions.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Data("KS test needs two non-empty samples".into()));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::Data("KS samples contain NaN".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (m, n) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / m - j as f64 / n).abs());
    }
    Ok(d)
}

/// Two-sample Kolmogorov–Smirnov test at significance 0.01.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestReport> {
    ks_two_sample_at(a, b, SIGNIFICANCE)
}

/// Two-sample KS test at significance `alpha`.
pub fn ks_two_sample_at(a: &[f64], b: &[f64], alpha: f64) -> Result<TestReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(param("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    let d = ks_statistic(a, b)?;
    Ok(
        TestReport::threshold_test("ks_two_sample", d, ks_threshold(a.len(), b.len(), alpha), vec![
            a.len(),
            b.len(),
        ])
        .with_detail("alpha", alpha)
        .with_detail("asymptotic", a.len().min(b.len()) >= MIN_KS_SAMPLES),
    )
}

/// Several KS comparisons of equal-size sample pairs combined with a
/// Bonferroni correction. The statistic is the largest `D`; all pairs share
/// one threshold.
pub(crate) fn ks_family(
    name: &str,
    pairs: Vec<(String, Vec<f64>, Vec<f64>)>,
) -> Result<TestReport> {
    if pairs.is_empty() {
        return Err(Error::Precondition(format!("{name}: nothing to compare")));
    }
    let alpha = SIGNIFICANCE / pairs.len() as f64;
    let mut worst: f64 = 0.0;
    let mut threshold = f64::INFINITY;
    let mut parts = Vec::with_capacity(pairs.len());
    let mut sizes = Vec::new();
    for (label, a, b) in &pairs {
        if a.len() < MIN_KS_SAMPLES || b.len() < MIN_KS_SAMPLES {
            return Err(Error::Size(format!(
                "{name}: {label} compares samples of size {} and {}, at least {MIN_KS_SAMPLES} required",
                a.len(),
                b.len()
            )));
        }
        let d = ks_statistic(a, b)?;
        let c = ks_threshold(a.len(), b.len(), alpha);
        worst = worst.max(d / c);
        threshold = threshold.min(c);
        parts.push(serde_json::json!({ "comparison": label, "statistic": d, "threshold": c }));
        if sizes.is_empty() {
            sizes = vec![a.len(), b.len()];
        }
    }
    // Statistics are compared in units of their own thresholds; report on
    // the scale of the smallest threshold so pass == (statistic <= threshold).
    let mut report = TestReport::threshold_test(name, worst * threshold, threshold, sizes);
    report.pass = worst <= 1.0;
    report.add_detail("alpha_per_comparison", alpha);
    report.add_detail("comparisons", parts);
    report.add_detail(
        "scope",
        "equality in law checked on one-dimensional marginals and pairwise summaries only",
    );
    Ok(report)
}

/// Splits `0..n` into the first and second half, the two independent
/// sub-ensembles used by the composite tests.
pub(crate) fn halves(n: usize) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
    let mid = n / 2;
    (0..mid, mid..2 * mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path_core::StreamSeed;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn normals(n: usize, shift: f64, seed: u64, stream: u64) -> Vec<f64> {
        let mut rng = StreamSeed::new(seed, stream).rng();
        (0..n).map(|_| shift + rng.sample::<f64, _>(StandardNormal)).collect()
    }

    /// Brute-force oracle: evaluate both ECDFs at every sample point.
    fn ks_brute(a: &[f64], b: &[f64]) -> f64 {
        let ecdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
        a.iter()
            .chain(b)
            .map(|&x| (ecdf(a, x) - ecdf(b, x)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn critical_value_at_one_percent() {
        assert!((ks_critical_value(0.01) - 1.6276).abs() < 1e-4);
    }

    #[test]
    fn statistic_matches_brute_force() {
        let a = normals(300, 0.0, 1, 0);
        let b = normals(200, 0.3, 1, 1);
        assert!((ks_statistic(&a, &b).unwrap() - ks_brute(&a, &b)).abs() < 1e-15);
        let ties_a = [1.0, 1.0, 2.0, 3.0, 3.0];
        let ties_b = [1.0, 2.0, 2.0, 2.0];
        assert!((ks_statistic(&ties_a, &ties_b).unwrap() - ks_brute(&ties_a, &ties_b)).abs() < 1e-15);
    }

    #[test]
    fn identical_samples_pass() {
        let a = normals(1000, 0.0, 2, 0);
        let r = ks_two_sample(&a, &a).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn separated_laws_fail() {
        let r = ks_two_sample(&normals(1000, 0.0, 3, 0), &normals(1000, 5.0, 3, 1)).unwrap();
        assert!(!r.pass);
        assert!(r.statistic > 0.99);
    }

    #[test]
    fn empty_sample_is_an_error() {
        assert!(ks_two_sample(&[], &[1.0]).is_err());
    }

    #[test]
    fn family_requires_large_samples() {
        let pair = ("x".to_string(), vec![0.0; 10], vec![0.0; 10]);
        assert!(matches!(ks_family("f", vec![pair]), Err(Error::Size(_))));
    }
}
