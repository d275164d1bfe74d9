//! Mass profiles: odd, strictly increasing kinks with `m(0) = 0`.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::specfun::erf;
use crate::{Error, Result, DEFAULT_THRESHOLD};

/// The supported mass families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MassProfile {
    /// `m(x) = tanh x`
    Tanh,
    /// `m(x) = erf x`
    Erf,
    /// `m(x) = x / √(1 + x²/3)`, which tends to `±√3`.
    #[serde(rename = "sigmoid")]
    AlgebraicSigmoid,
}

/// `m`, `m′` and `m″` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassValue {
    pub m: f64,
    pub dm: f64,
    pub d2m: f64,
}

impl MassProfile {
    pub const ALL: [MassProfile; 3] = [Self::Tanh, Self::Erf, Self::AlgebraicSigmoid];

    pub fn name(self) -> &'static str {
        match self {
            Self::Tanh => "tanh",
            Self::Erf => "erf",
            Self::AlgebraicSigmoid => "sigmoid",
        }
    }

    pub fn mass(self, x: f64) -> f64 {
        match self {
            Self::Tanh => x.tanh(),
            Self::Erf => erf(x),
            Self::AlgebraicSigmoid => x / (1.0 + x * x / 3.0).sqrt(),
        }
    }

    pub fn eval(self, x: f64) -> MassValue {
        match self {
            Self::Tanh => {
                let t = x.tanh();
                let sech2 = 1.0 / (x.cosh() * x.cosh());
                MassValue {
                    m: t,
                    dm: sech2,
                    d2m: -2.0 * sech2 * t,
                }
            }
            Self::Erf => {
                let dm = 2.0 / PI.sqrt() * (-x * x).exp();
                MassValue {
                    m: erf(x),
                    dm,
                    d2m: -2.0 * x * dm,
                }
            }
            Self::AlgebraicSigmoid => {
                let s = 1.0 + x * x / 3.0;
                let root = s.sqrt();
                MassValue {
                    m: x / root,
                    dm: 1.0 / (s * root),
                    d2m: -x / (s * s * root),
                }
            }
        }
    }

    /// `M(x) = ∫₀ˣ m(t) dt`, even and nonnegative.
    pub fn antiderivative(self, x: f64) -> f64 {
        match self {
            Self::Tanh => {
                // ln cosh x without overflow for large |x|
                let ax = x.abs();
                ax + (-2.0 * ax).exp().ln_1p() - LN_2
            }
            Self::Erf => x * erf(x) + (-x * x).exp_m1() / PI.sqrt(),
            Self::AlgebraicSigmoid => x * x / ((1.0 + x * x / 3.0).sqrt() + 1.0),
        }
    }

    /// `lim_{x→∞} m(x)`.
    pub fn limit(self) -> f64 {
        match self {
            Self::Tanh | Self::Erf => 1.0,
            Self::AlgebraicSigmoid => 3f64.sqrt(),
        }
    }

    /// Continuum cutoff for bound states: `min(limit², 0.999)`.
    pub fn continuum_threshold(self) -> f64 {
        (self.limit() * self.limit()).min(DEFAULT_THRESHOLD)
    }
}

impl fmt::Display for MassProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MassProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tanh" => Ok(Self::Tanh),
            "erf" => Ok(Self::Erf),
            "sigmoid" | "algebraic-sigmoid" | "algebraicsigmoid" => Ok(Self::AlgebraicSigmoid),
            other => Err(Error::Domain(format!(
                "unknown profile {other:?}; expected tanh, erf or sigmoid"
            ))),
        }
    }
}
