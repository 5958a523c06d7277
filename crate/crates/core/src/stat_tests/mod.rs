//! Statistical checks that turn distributional claims into pass/fail
//! reports.
//!
//! Equality in law is tested with two-sample Kolmogorov–Smirnov tests at
//! significance 0.01, Bonferroni-corrected across the comparisons of a
//! composite test. Composite tests compare values across the ensemble at
//! fixed times and take the two samples from disjoint halves of the paths,
//! so each KS comparison sees independent i.i.d. samples.

mod ensemble;
mod ks;
mod membership;
mod report;

pub use ensemble::{
    covariance, empirical_autocovariance, sample_variance, series_autocorrelation,
    test_increment_stationarity, test_self_similarity, test_stationarity, Autocovariance,
};
pub use ks::{
    ks_critical_value, ks_statistic, ks_threshold, ks_two_sample, ks_two_sample_at, MIN_KS_SAMPLES,
    SIGNIFICANCE,
};
pub use membership::{log_moment_check, log_moment_check_log_abs, test_gh_membership, MEMBERSHIP_DOUBLINGS};
pub use report::{all_of, TestReport};
