use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Largest number of points a grid may hold.
pub const MAX_GRID_POINTS: usize = 1 << 31;

/// Relative tolerance used to decide that a grid has constant step or ratio.
const KIND_TOL: f64 = 1e-6;

/// How the points of a [`TimeGrid`] were laid out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GridKind {
    Uniform { step: f64 },
    Geometric { ratio: f64 },
    Explicit,
}

/// Strictly increasing sampling times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Vec<f64>,
    kind: GridKind,
}

impl TimeGrid {
    /// Points `start + i * step` up to and including `stop` (when `stop` sits
    /// on the lattice up to rounding).
    pub fn uniform(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(param("step", format!("must be positive and finite, got {step}")));
        }
        if !start.is_finite() || !stop.is_finite() || stop <= start {
            return Err(param("stop", format!("need finite start < stop, got {start}..{stop}")));
        }
        let steps = ((stop - start) / step + 1e-9).floor();
        if steps + 1.0 > MAX_GRID_POINTS as f64 {
            return Err(Error::Size(format!("{} grid points", steps + 1.0)));
        }
        Self::uniform_n(start, step, steps as usize + 1)
    }

    /// `len` points `start + i * step`.
    pub fn uniform_n(start: f64, step: f64, len: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(param("step", format!("must be positive and finite, got {step}")));
        }
        let points = (0..len).map(|i| start + i as f64 * step).collect();
        Self::build(points, GridKind::Uniform { step })
    }

    /// Points `start * ratio^i` up to and including `stop`.
    pub fn geometric(start: f64, stop: f64, ratio: f64) -> Result<Self> {
        if !(start > 0.0) || !start.is_finite() {
            return Err(param("start", format!("geometric grids need start > 0, got {start}")));
        }
        if !(ratio > 1.0) || !ratio.is_finite() {
            return Err(param("ratio", format!("must exceed 1, got {ratio}")));
        }
        if !stop.is_finite() || stop <= start {
            return Err(param("stop", format!("need start < stop, got {start}..{stop}")));
        }
        let steps = ((stop / start).ln() / ratio.ln() + 1e-9).floor();
        if steps + 1.0 > MAX_GRID_POINTS as f64 {
            return Err(Error::Size(format!("{} grid points", steps + 1.0)));
        }
        Self::geometric_n(start, ratio, steps as usize + 1)
    }

    /// `len` points `start * ratio^i`.
    pub fn geometric_n(start: f64, ratio: f64, len: usize) -> Result<Self> {
        if !(start > 0.0) {
            return Err(param("start", format!("geometric grids need start > 0, got {start}")));
        }
        if !(ratio > 1.0) || !ratio.is_finite() {
            return Err(param("ratio", format!("must exceed 1, got {ratio}")));
        }
        let log_start = start.ln();
        let log_ratio = ratio.ln();
        let points = (0..len)
            .map(|i| (log_start + i as f64 * log_ratio).exp())
            .collect();
        Self::build(points, GridKind::Geometric { ratio })
    }

    /// Arbitrary strictly increasing points.
    pub fn explicit(points: Vec<f64>) -> Result<Self> {
        Self::build(points, GridKind::Explicit)
    }

    /// Points with a claimed layout. The claim is checked against the points.
    pub fn with_kind(points: Vec<f64>, kind: GridKind) -> Result<Self> {
        Self::build(points, kind)
    }

    /// Labels the points uniform or geometric when they are, explicit otherwise.
    pub fn infer(points: Vec<f64>) -> Result<Self> {
        let grid = Self::build(points, GridKind::Explicit)?;
        let kind = grid.detect_kind();
        Ok(Self { kind, ..grid })
    }

    fn build(points: Vec<f64>, kind: GridKind) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Data(format!(
                "a grid needs at least 2 points, got {}",
                points.len()
            )));
        }
        if points.len() > MAX_GRID_POINTS {
            return Err(Error::Size(format!("{} grid points", points.len())));
        }
        if let Some(bad) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::Data(format!("non-finite grid point {bad}")));
        }
        if let Some(w) = points.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::Data(format!(
                "grid not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        let grid = Self { points, kind };
        match kind {
            GridKind::Uniform { step } => {
                let ok = grid
                    .points
                    .windows(2)
                    .all(|w| ((w[1] - w[0]) - step).abs() <= KIND_TOL * step);
                if !ok {
                    return Err(Error::Data(format!("points are not uniform with step {step}")));
                }
            }
            GridKind::Geometric { ratio } => {
                if grid.points[0] <= 0.0 {
                    return Err(Error::Data("geometric grid with non-positive point".into()));
                }
                let ok = grid
                    .points
                    .windows(2)
                    .all(|w| (w[1] / w[0] - ratio).abs() <= KIND_TOL * ratio);
                if !ok {
                    return Err(Error::Data(format!(
                        "points are not geometric with ratio {ratio}"
                    )));
                }
            }
            GridKind::Explicit => {}
        }
        Ok(grid)
    }

    fn detect_kind(&self) -> GridKind {
        let p = &self.points;
        let n = p.len();
        let step = (p[n - 1] - p[0]) / (n - 1) as f64;
        if p
            .windows(2)
            .all(|w| ((w[1] - w[0]) - step).abs() <= KIND_TOL * step)
        {
            return GridKind::Uniform { step };
        }
        if p[0] > 0.0 {
            let ratio = ((p[n - 1] / p[0]).ln() / (n - 1) as f64).exp();
            if p
                .windows(2)
                .all(|w| (w[1] / w[0] - ratio).abs() <= KIND_TOL * ratio)
            {
                return GridKind::Geometric { ratio };
            }
        }
        GridKind::Explicit
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; grids hold at least two points.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Constant step of a uniform grid.
    pub fn step(&self) -> Option<f64> {
        match self.kind {
            GridKind::Uniform { step } => Some(step),
            _ => None,
        }
    }

    /// Constant ratio of a geometric grid.
    pub fn ratio(&self) -> Option<f64> {
        match self.kind {
            GridKind::Geometric { ratio } => Some(ratio),
            _ => None,
        }
    }

    /// True when `t` lies in `[start, end]`.
    pub fn spans(&self, t: f64) -> bool {
        t >= self.start() && t <= self.end()
    }

    fn out_of_range(&self, t: f64) -> Error {
        Error::OutOfRange {
            time: t,
            start: self.start(),
            end: self.end(),
        }
    }

    /// Index of the grid point equal to `t`, up to a tolerance of 1e-6 of the
    /// local spacing.
    pub fn locate(&self, t: f64) -> Result<usize> {
        self.find(t).ok_or_else(|| {
            if self.spans(t) || self.near_end(t) {
                Error::Domain(format!("time {t} is not a grid point"))
            } else {
                self.out_of_range(t)
            }
        })
    }

    /// Like [`TimeGrid::locate`] but returns `None` on failure.
    pub fn find(&self, t: f64) -> Option<usize> {
        if !t.is_finite() {
            return None;
        }
        let p = &self.points;
        let i = p.partition_point(|&x| x < t);
        let candidates = [i.checked_sub(1), Some(i)];
        candidates
            .into_iter()
            .flatten()
            .filter(|&j| j < p.len())
            .find(|&j| (p[j] - t).abs() <= 1e-6 * self.spacing_at(j))
    }

    fn near_end(&self, t: f64) -> bool {
        let n = self.len();
        (t - self.start()).abs() <= 1e-6 * self.spacing_at(0)
            || (t - self.end()).abs() <= 1e-6 * self.spacing_at(n - 1)
    }

    fn spacing_at(&self, j: usize) -> f64 {
        let p = &self.points;
        if j + 1 < p.len() {
            p[j + 1] - p[j]
        } else {
            p[j] - p[j - 1]
        }
    }

    /// Cell `[points[i], points[i+1]]` containing `t` and the interpolation
    /// weight of the right end point.
    pub fn bracket(&self, t: f64) -> Result<(usize, f64)> {
        if let Some(j) = self.find(t) {
            return Ok(if j + 1 < self.len() { (j, 0.0) } else { (j - 1, 1.0) });
        }
        if !self.spans(t) {
            return Err(self.out_of_range(t));
        }
        let p = &self.points;
        let i = p.partition_point(|&x| x <= t) - 1;
        let w = (t - p[i]) / (p[i + 1] - p[i]);
        Ok((i, w))
    }

    /// Index `k` such that `start + k * step == t` for the lattice of a
    /// uniform grid, extended beyond its span.
    pub fn lattice_index(&self, t: f64) -> Option<i64> {
        let step = self.step()?;
        let k = ((t - self.start()) / step).round();
        let on_lattice = (self.start() + k * step - t).abs() <= 1e-6 * step;
        on_lattice.then_some(k as i64)
    }

    /// The sub-grid of points with indices in `lo..=hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<Self> {
        if hi >= self.len() || lo >= hi {
            return Err(Error::Data(format!(
                "invalid sub-grid {lo}..={hi} of {} points",
                self.len()
            )));
        }
        Ok(Self {
            points: self.points[lo..=hi].to_vec(),
            kind: self.kind,
        })
    }

    /// The image of the grid under a strictly increasing map.
    pub fn map(&self, f: impl Fn(f64) -> f64, kind: GridKind) -> Result<Self> {
        Self::build(self.points.iter().map(|&t| f(t)).collect(), kind)
    }

    /// Short textual description used in manifests and reports.
    pub fn describe(&self) -> GridDescription {
        GridDescription {
            layout: self.kind,
            start: self.start(),
            end: self.end(),
            len: self.len(),
        }
    }
}

/// Serializable summary of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDescription {
    #[serde(flatten)]
    pub layout: GridKind,
    pub start: f64,
    pub end: f64,
    pub len: usize,
}
