use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Hurst index `H > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstParam(f64);

impl HurstParam {
    pub fn new(h: f64) -> Result<Self> {
        if h > 0.0 && h.is_finite() {
            Ok(Self(h))
        } else {
            Err(param("H", format!("must be positive and finite, got {h}")))
        }
    }

    /// Hurst index admissible for fractional Brownian motion, `0 < H < 1`.
    pub fn fractional(h: f64) -> Result<Self> {
        if h > 0.0 && h < 1.0 {
            Ok(Self(h))
        } else {
            Err(param("H", format!("fractional Brownian motion needs 0 < H < 1, got {h}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for HurstParam {
    type Error = crate::Error;

    fn try_from(h: f64) -> Result<Self> {
        Self::new(h)
    }
}

impl From<HurstParam> for f64 {
    fn from(h: HurstParam) -> f64 {
        h.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_ranges() {
        assert!(HurstParam::new(2.0).is_ok());
        assert!(HurstParam::new(0.0).is_err());
        assert!(HurstParam::new(f64::NAN).is_err());
        assert!(HurstParam::fractional(0.75).is_ok());
        assert!(HurstParam::fractional(1.0).is_err());
        assert!(HurstParam::fractional(1.5).is_err());
    }
}
