//! The Lamperti transform `(L_H U)_t = t^H U_{log t}` and its inverse
//! `(L_H^{-1} X)_t = e^{−Ht} X_{e^t}`, which map stationary processes to
//! `H`-self-similar ones and back.
//!
//! Both directions return the path on the image grid (`{e^u}` forward,
//! `{log m}` inverse) so no interpolation is involved. A uniform grid maps to
//! a geometric one and vice versa.

use std::sync::Arc;

use crate::discrete_ar::DiscreteSeries;
use crate::error::{Error, Result};
use crate::path_core::{GridKind, HurstParam, SamplePath};

/// `X_{e^u} = e^{Hu} U_u` on the grid `{e^u}`.
pub fn lamperti_forward(u: &SamplePath, h: HurstParam) -> Result<SamplePath> {
    let h = h.value();
    let kind = match u.grid().kind() {
        GridKind::Uniform { step } => GridKind::Geometric { ratio: step.exp() },
        _ => GridKind::Explicit,
    };
    let grid = u.grid().map(f64::exp, kind).map_err(|e| match e {
        Error::Data(msg) => Error::Domain(format!("image grid is not representable: {msg}")),
        other => other,
    })?;
    let values = u
        .times()
        .iter()
        .zip(u.values())
        .map(|(&t, &v)| (h * t).exp() * v)
        .collect();
    SamplePath::new(Arc::new(grid), values)
}

/// `U_t = e^{−Ht} X_{e^t}` on the grid `{log m}`. Every grid point of `x`
/// must be positive.
pub fn lamperti_inverse(x: &SamplePath, h: HurstParam) -> Result<SamplePath> {
    if x.grid().start() <= 0.0 {
        return Err(Error::Domain(format!(
            "inverse Lamperti transform needs positive times, grid starts at {}",
            x.grid().start()
        )));
    }
    let h = h.value();
    let kind = match x.grid().kind() {
        GridKind::Geometric { ratio } => GridKind::Uniform { step: ratio.ln() },
        _ => GridKind::Explicit,
    };
    let grid = x.grid().map(f64::ln, kind)?;
    let values = grid
        .points()
        .iter()
        .zip(x.values())
        .map(|(&t, &v)| (-h * t).exp() * v)
        .collect();
    SamplePath::new(Arc::new(grid), values)
}

/// Discrete transform on `M = {e^n}`: entry `n` of the result is
/// `X_{e^n} = e^{Hn} U_n`.
pub fn discrete_lamperti(u: &DiscreteSeries, h: f64) -> Result<DiscreteSeries> {
    let values = u
        .indices()
        .zip(u.values())
        .map(|(n, &v)| (h * n as f64).exp() * v)
        .collect();
    DiscreteSeries::new(u.start(), values)
}

/// Inverse of [`discrete_lamperti`]: `U_n = e^{−Hn} X_{e^n}`.
pub fn discrete_lamperti_inverse(x: &DiscreteSeries, h: f64) -> Result<DiscreteSeries> {
    discrete_lamperti(x, -h)
}
