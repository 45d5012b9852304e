//! Scalar abstraction so the pipeline can run in double or double-double precision.

use std::fmt::Debug;

use num_traits::{Float, FloatConst};
use num_bigfloat::BigFloat;

/// Real scalar used by jets and everything built on them.
pub trait Real: Float + FloatConst + Debug + Default + Send + Sync + 'static {
    fn c(x: f64) -> Self;
    fn f64(self) -> f64;

    fn from_usize(n: usize) -> Self {
        Self::c(n as f64)
    }
}

impl Real for f64 {
    #[inline]
    fn c(x: f64) -> Self {
        x
    }
    #[inline]
    fn f64(self) -> f64 {
        self
    }
}

impl Real for BigFloat {
    #[inline]
    fn c(x: f64) -> Self {
        BigFloat::from_f64(x)
    }
    #[inline]
    fn f64(self) -> f64 {
        self.to_f64()
    }
}

/// Software float with about 40 significant digits, used in extended-precision runs.
pub type Extended = BigFloat;

/// Precision mode selectable from configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

impl std::str::FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(format!("unknown precision `{other}` (expected double or extended)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_round_trip_and_accuracy() {
        let x = Extended::c(0.1);
        assert_eq!(x.f64(), 0.1);
        let third = Extended::c(1.0) / Extended::c(3.0);
        let err = (third * Extended::c(3.0) - Extended::c(1.0)).abs().f64();
        assert!(err < 1e-30, "{err:e}");
        let s = Extended::c(0.7).sin();
        assert!((s.f64() - 0.7f64.sin()).abs() < 1e-16);
    }
}
