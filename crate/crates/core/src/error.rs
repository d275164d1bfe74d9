use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{method} did not converge: estimated error {est_error:e} after {steps} steps")]
    NoConvergence {
        method: &'static str,
        steps: usize,
        est_error: f64,
    },

    #[error("root not bracketed: g({lo}) = {g_lo:e}, g({hi}) = {g_hi:e}")]
    BadBracket { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigensolver failed to converge for eigenpair {index}")]
    ConvergenceFailure { index: usize },

    #[error("state n = {n} needs phase {target:.6} but the phase only reaches {max_phase:.6} below the threshold")]
    AboveThreshold { n: usize, target: f64, max_phase: f64 },

    #[error("x = {x} lies within {half_width:.4} of the turning point {turning_point}")]
    ExclusionZone {
        x: f64,
        turning_point: f64,
        half_width: f64,
    },

    #[error("WKB validity margin diverges at x = {x} (turning point)")]
    DivergentAtTurningPoint { x: f64 },
}
