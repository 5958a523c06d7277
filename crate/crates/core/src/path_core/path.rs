use std::sync::Arc;

use crate::error::{Error, Result};

use super::grid::TimeGrid;

/// One realization: a grid plus one finite value per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    grid: Arc<TimeGrid>,
    values: Vec<f64>,
}

impl SamplePath {
    pub fn new(grid: Arc<TimeGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Data(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "non-finite value {} at t = {}",
                values[i],
                grid.points()[i]
            )));
        }
        Ok(Self { grid, values })
    }

    /// Evaluates `f` at every grid point.
    pub fn from_fn(grid: Arc<TimeGrid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<TimeGrid> {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        self.grid.points()
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

    /// Value at a grid point.
    pub fn at(&self, t: f64) -> Result<f64> {
        Ok(self.values[self.grid.locate(t)?])
    }

    /// Linearly interpolated value at any time inside the grid span.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let (i, w) = self.grid.bracket(t)?;
        Ok(interpolate(self.values[i], self.values[i + 1], w))
    }

    /// Linear interpolation onto `new_grid`, exact at shared points.
    pub fn resample(&self, new_grid: Arc<TimeGrid>) -> Result<Self> {
        if Arc::ptr_eq(&new_grid, &self.grid) || *new_grid == *self.grid {
            return Self::new(new_grid, self.values.clone());
        }
        let values = new_grid
            .points()
            .iter()
            .map(|&t| self.value_at(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(new_grid, values)
    }

    /// The part of the path on grid points in `[from, to]`; both ends must be
    /// grid points.
    pub fn restrict(&self, from: f64, to: f64) -> Result<Self> {
        let lo = self.grid.locate(from)?;
        let hi = self.grid.locate(to)?;
        let grid = Arc::new(self.grid.slice(lo, hi)?);
        Self::new(grid, self.values[lo..=hi].to_vec())
    }

    /// Same grid, values replaced.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.grid.clone(), values)
    }
}

#[inline]
pub(crate) fn interpolate(left: f64, right: f64, w: f64) -> f64 {
    if w == 0.0 {
        left
    } else if w == 1.0 {
        right
    } else {
        left + w * (right - left)
    }
}
