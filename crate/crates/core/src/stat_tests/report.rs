use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Outcome of a statistical verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub n_samples: Vec<usize>,
    pub details: Map<String, Value>,
}

impl TestReport {
    /// A report that passes iff `statistic <= threshold`.
    pub fn threshold_test(
        name: impl Into<String>,
        statistic: f64,
        threshold: f64,
        n_samples: Vec<usize>,
    ) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold,
            pass: statistic <= threshold,
            n_samples,
            details: Map::new(),
        }
    }

    pub fn with_detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn add_detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    /// Attaches sub-reports under `details.components`.
    pub fn with_components(mut self, components: &[TestReport]) -> Self {
        let list = components
            .iter()
            .map(|c| serde_json::to_value(c).unwrap_or(Value::Null))
            .collect::<Vec<_>>();
        self.details.insert("components".into(), Value::Array(list));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// One-line summary, e.g. for acceptance logs.
    pub fn summary(&self) -> String {
        let n = if self.n_samples.len() <= 6 {
            format!("{:?}", self.n_samples)
        } else {
            format!("{:?} and {} more", &self.n_samples[..6], self.n_samples.len() - 6)
        };
        format!(
            "{} {}: statistic {:.6} vs threshold {:.6} (n = {n})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.statistic,
            self.threshold,
        )
    }
}

/// Combines sub-reports into one that passes iff all of them pass. The
/// statistic is the number of failing components, the threshold zero.
pub fn all_of(name: impl Into<String>, components: Vec<TestReport>) -> TestReport {
    let failures = components.iter().filter(|c| !c.pass).count();
    let n_samples = components
        .iter()
        .flat_map(|c| c.n_samples.iter().copied())
        .collect();
    TestReport::threshold_test(name, failures as f64, 0.0, n_samples).with_components(&components)
}
