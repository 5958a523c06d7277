use std::sync::Arc;

use crate::error::{Error, Result};
use crate::path_core::{SamplePath, TimeGrid};

/// Values on contiguous integer indices `start, start + 1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSeries {
    start: i64,
    values: Vec<f64>,
}

impl DiscreteSeries {
    pub fn new(start: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Data("empty series".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "non-finite value {} at index {}",
                values[i],
                start + i as i64
            )));
        }
        Ok(Self { start, values })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last index, inclusive.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        self.start..=self.end()
    }

    pub fn get(&self, n: i64) -> Option<f64> {
        if n < self.start || n > self.end() {
            return None;
        }
        Some(self.values[(n - self.start) as usize])
    }

    /// Entries with indices in `from..=to`.
    pub fn window(&self, from: i64, to: i64) -> Result<Self> {
        if from < self.start || to > self.end() || from > to {
            return Err(Error::Misaligned(format!(
                "window {from}..={to} outside {}..={}",
                self.start,
                self.end()
            )));
        }
        let lo = (from - self.start) as usize;
        let hi = (to - self.start) as usize;
        Self::new(from, self.values[lo..=hi].to_vec())
    }

    /// The series as a path on the unit-step grid of its indices.
    pub fn to_path(&self) -> Result<SamplePath> {
        let grid = TimeGrid::uniform_n(self.start as f64, 1.0, self.len())?;
        SamplePath::new(Arc::new(grid), self.values.clone())
    }

    /// Partial sums `G_n = Σ_{k ≤ n} ΔG_k` with `G_{start−1} = 0`, treating
    /// the series as increments.
    pub fn cumulative(&self) -> Self {
        let mut acc = 0.0;
        let values = self
            .values
            .iter()
            .map(|d| {
                acc += d;
                acc
            })
            .collect();
        Self {
            start: self.start,
            values,
        }
    }
}
