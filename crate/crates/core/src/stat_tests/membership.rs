use crate::error::{param, Error, Result};
use crate::path_core::NoiseHistory;

use super::report::TestReport;

/// Number of horizon doublings monitored by [`test_gh_membership`].
pub const MEMBERSHIP_DOUBLINGS: u32 = 4;

/// Checks that `∫_{−∞}^0 e^{Hu} dG_u` exists for the history of `g`.
///
/// The truncated integral over `[−T, 0]` is evaluated for
/// `T = T_max / 16, ..., T_max / 2, T_max`, where `T_max` is the available
/// history. The check passes when the last change of the truncated value and
/// the weighted size `max e^{−Hu} |G_{−u}|` over `u ∈ [T_max/2, T_max]` are
/// both below `tol`.
pub fn test_gh_membership<G: NoiseHistory + ?Sized>(g: &G, h: f64, tol: f64) -> Result<TestReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(param("H", format!("must be positive, got {h}")));
    }
    if !(tol > 0.0) {
        return Err(param("tol", format!("must be positive, got {tol}")));
    }
    let span = g.history_span();
    let first = span / f64::from(1 << MEMBERSHIP_DOUBLINGS);
    if !(first >= g.resolution()) {
        return Err(Error::Precondition(format!(
            "history of length {span} does not allow {MEMBERSHIP_DOUBLINGS} doublings from resolution {}",
            g.resolution()
        )));
    }
    let horizons: Vec<f64> = (0..=MEMBERSHIP_DOUBLINGS)
        .map(|k| first * f64::from(1 << k))
        .collect();
    let values = horizons
        .iter()
        .map(|&t| g.tail_integral(h, t))
        .collect::<Result<Vec<_>>>()?;
    let diffs: Vec<f64> = values.windows(2).map(|w| nan_to_inf((w[1] - w[0]).abs())).collect();
    let cauchy = *diffs.last().expect("several horizons");
    let decay = nan_to_inf(g.weighted_size(h, span / 2.0, span)?);
    let statistic = cauchy.max(decay);
    Ok(TestReport::threshold_test("gh_membership", statistic, tol, vec![horizons.len()])
        .with_detail("H", h)
        .with_detail("horizons", horizons)
        .with_detail("truncated_integrals", values.iter().map(|v| finite_or_null(*v)).collect::<Vec<_>>())
        .with_detail("cauchy_differences", diffs.iter().map(|v| finite_or_null(*v)).collect::<Vec<_>>())
        .with_detail("cauchy_last", finite_or_null(cauchy))
        .with_detail("weighted_tail_size", finite_or_null(decay)))
}

fn nan_to_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn finite_or_null(v: f64) -> serde_json::Value {
    if v.is_finite() {
        v.into()
    } else {
        serde_json::Value::String(format!("{v}"))
    }
}

/// Number of blocks whose median mean is compared with the full-sample mean.
const LOG_MOMENT_BLOCKS: usize = 16;

/// Empirical `E[(log|G_t| 1{|G_t| > 1})^{2+δ}]` for each sample set in
/// `columns` (typically ensemble values of `G_t` at several `t ∈ [0, 1]`).
///
/// Stability under sample doubling is judged by comparing the full-sample
/// mean with the median of the means of 16 equal blocks, i.e. four doublings
/// apart. A heavy tail with infinite moment makes the full mean run away
/// from the typical block mean. The check passes if every estimate is finite
/// and every ratio is below 2.
///
/// The log-moment condition is sufficient, not necessary, for membership
/// in the noise class; a failure says nothing about non-membership.
pub fn log_moment_check(columns: &[Vec<f64>], delta: f64) -> Result<TestReport> {
    let logs: Vec<Vec<f64>> = columns
        .iter()
        .map(|c| c.iter().map(|x| x.abs().ln()).collect())
        .collect();
    log_moment_check_log_abs(&logs, delta)
}

/// [`log_moment_check`] for samples given as `log|G_t|`, for laws such as
/// `e^{ξ}` with Pareto `ξ` whose values overflow.
pub fn log_moment_check_log_abs(log_abs: &[Vec<f64>], delta: f64) -> Result<TestReport> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(param("delta", format!("must be positive, got {delta}")));
    }
    if log_abs.is_empty() {
        return Err(param("columns", "need at least one sample set"));
    }
    let p = 2.0 + delta;
    let mut worst_moment: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    let mut per_column = Vec::new();
    for col in log_abs {
        if col.len() < LOG_MOMENT_BLOCKS {
            return Err(Error::Size(format!(
                "need at least {LOG_MOMENT_BLOCKS} samples per time, got {}",
                col.len()
            )));
        }
        if col.iter().any(|v| v.is_nan()) {
            return Err(Error::Data("log-moment samples contain NaN".into()));
        }
        let y: Vec<f64> = col.iter().map(|&l| if l > 0.0 { l.powf(p) } else { 0.0 }).collect();
        let full = mean(&y);
        let block = y.len() / LOG_MOMENT_BLOCKS;
        let mut blocks: Vec<f64> = y.chunks_exact(block).take(LOG_MOMENT_BLOCKS).map(mean).collect();
        blocks.sort_unstable_by(f64::total_cmp);
        let typical = 0.5 * (blocks[LOG_MOMENT_BLOCKS / 2 - 1] + blocks[LOG_MOMENT_BLOCKS / 2]);
        let ratio = if full == 0.0 && typical == 0.0 {
            1.0
        } else if typical == 0.0 {
            f64::INFINITY
        } else {
            full / typical
        };
        let ratio = nan_to_inf(ratio);
        worst_moment = worst_moment.max(nan_to_inf(full));
        worst_ratio = worst_ratio.max(ratio);
        per_column.push(serde_json::json!({
            "moment": finite_or_null(full),
            "block_median": finite_or_null(typical),
            "ratio": finite_or_null(ratio),
            "n": col.len(),
        }));
    }
    let mut report = TestReport::threshold_test(
        "log_moment",
        worst_ratio,
        2.0,
        log_abs.iter().map(Vec::len).collect(),
    );
    report.pass = worst_moment.is_finite() && worst_ratio < 2.0;
    report.add_detail("delta", delta);
    report.add_detail("max_moment", finite_or_null(worst_moment));
    report.add_detail("columns", per_column);
    report.add_detail(
        "note",
        "the log-moment condition is sufficient, not necessary; failure does not imply non-membership",
    );
    Ok(report)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}
