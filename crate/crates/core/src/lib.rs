//! Spectral toolkit for the one-dimensional semiclassical Dirac operator
//! `D = m(x) σx − iε ∂x σy` with a mass kink `m`.
//!
//! Bound states of the squared operator are computed along three routes
//! that check each other:
//!
//! * closed-form Pöschl–Teller eigenvalues for `m = tanh` ([`pt_exact`]),
//! * the pseudo-spin–shifted Bohr–Sommerfeld condition
//!   `Φ(ℰ) = (n + (σ_D + 1)/2)π` ([`wkb`]),
//! * fourth-order finite differences on a box ([`operator`], [`eigen`]).
//!
//! [`diagnostics`] lines the three up against each other.

pub mod diagnostics;
pub mod eigen;
mod error;
pub mod operator;
pub mod profiles;
pub mod pt_exact;
pub mod quadrature;
pub mod specfun;
pub mod wkb;

pub use error::{Error, Result};
pub use profiles::{MassProfile, MassValue};

/// Pseudo-spin index selecting one diagonal block of the squared operator.
///
/// `Upper` is `σ_D = −1` (potential `m² − εm′`, hosts the zero mode);
/// `Lower` is `σ_D = +1` (potential `m² + εm′`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Sector {
    Upper,
    Lower,
}

impl Sector {
    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            -1 => Ok(Sector::Upper),
            1 => Ok(Sector::Lower),
            other => Err(Error::Domain(format!(
                "pseudo-spin index must be -1 or +1, got {other}"
            ))),
        }
    }

    /// The value of `σ_D`.
    pub fn sign(self) -> i32 {
        match self {
            Sector::Upper => -1,
            Sector::Lower => 1,
        }
    }

    pub fn sign_f64(self) -> f64 {
        f64::from(self.sign())
    }

    /// `(σ_D + 1) / 2`: the index offset in the quantization condition.
    pub fn index_offset(self) -> usize {
        match self {
            Sector::Upper => 0,
            Sector::Lower => 1,
        }
    }
}

/// Default continuum cutoff for the squared operator.
pub const DEFAULT_THRESHOLD: f64 = 0.999;

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "semiclassical parameter must lie in (0, 1), got {epsilon}"
        )))
    }
}
