//! Turning points, the phase integral, the shifted Bohr–Sommerfeld condition
//! and the WKB / Airy eigenfunctions built on it.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::operator::Grid;
use crate::quadrature::{brent, integrate_sqrt_endpoints};
use crate::specfun::airy;
use crate::{check_epsilon, Error, MassProfile, Result, Sector};

pub const PHASE_TOL: f64 = 1e-10;
pub const ENERGY_TOL: f64 = 1e-12;
pub const ENERGY_FLOOR: f64 = 1e-8;
pub const EXCLUSION_FACTOR: f64 = 1.5;
pub const INNER_HALF_WIDTH: f64 = 0.5;
const BOX_EDGE: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPoints {
    pub x_minus: f64,
    pub x_plus: f64,
    /// `2 m m′` at `x_minus` (negative).
    pub lambda_minus: f64,
    /// `2 m m′` at `x_plus` (positive).
    pub lambda_plus: f64,
}

/// Which turning point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl TurningPoints {
    pub fn at(&self, side: Side) -> (f64, f64) {
        match side {
            Side::Left => (self.x_minus, self.lambda_minus),
            Side::Right => (self.x_plus, self.lambda_plus),
        }
    }
}

/// Largest energy whose turning points still lie inside `[−12, 12]`.
pub fn max_energy(profile: MassProfile) -> f64 {
    profile.mass(BOX_EDGE).powi(2)
}

fn check_energy(profile: MassProfile, energy: f64) -> Result<()> {
    if !(energy > 0.0) {
        return Err(Error::Domain(format!(
            "energy must be positive for separated turning points, got {energy}"
        )));
    }
    if !(energy < max_energy(profile)) {
        return Err(Error::Domain(format!(
            "energy {energy} has no turning points inside the box for {profile}"
        )));
    }
    Ok(())
}

/// Solutions of `m(x)² = ℰ`.
pub fn turning_points(profile: MassProfile, energy: f64) -> Result<TurningPoints> {
    check_energy(profile, energy)?;
    let level = energy.sqrt();
    let x_plus = brent(|x| profile.mass(x) - level, 0.0, BOX_EDGE, 1e-14)?.root;
    let x_minus = brent(|x| profile.mass(x) + level, -BOX_EDGE, 0.0, 1e-14)?.root;
    let lambda = |x: f64| {
        let v = profile.eval(x);
        2.0 * v.m * v.dm
    };
    Ok(TurningPoints {
        x_minus,
        x_plus,
        lambda_minus: lambda(x_minus),
        lambda_plus: lambda(x_plus),
    })
}

/// `Φ(ℰ) = (1/ε) ∫_{x₋}^{x₊} √(ℰ − m²) dx`.
pub fn phase_integral(profile: MassProfile, epsilon: f64, energy: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let tp = turning_points(profile, energy)?;
    let r = integrate_sqrt_endpoints(
        |x| (energy - profile.mass(x).powi(2)).max(0.0).sqrt(),
        tp.x_minus,
        tp.x_plus,
        PHASE_TOL,
    )?;
    Ok(r.value / epsilon)
}

/// `Φ(ℰ) = (π/ε)(1 − √(1 − ℰ))` for `m = tanh`.
pub fn tanh_phase_closed_form(epsilon: f64, energy: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !(energy > 0.0 && energy < 1.0) {
        return Err(Error::Domain(format!("energy must lie in (0, 1), got {energy}")));
    }
    Ok(PI / epsilon * (1.0 - (1.0 - energy).sqrt()))
}

/// `(n + (σ_D + 1)/2) π`.
pub fn target_phase(sector: Sector, n: usize) -> f64 {
    (n + sector.index_offset()) as f64 * PI
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationResult {
    pub n: usize,
    pub sector: Sector,
    pub energy: f64,
    pub phase: f64,
    /// `Φ(ℰ) − (n + (σ_D + 1)/2)π`.
    pub residual: f64,
    pub bracket_width: f64,
    pub iterations: usize,
}

pub fn solve_bs(profile: MassProfile, epsilon: f64, sector: Sector, n: usize) -> Result<QuantizationResult> {
    solve_bs_with_threshold(profile, epsilon, sector, n, profile.continuum_threshold())
}

pub fn solve_bs_with_threshold(
    profile: MassProfile,
    epsilon: f64,
    sector: Sector,
    n: usize,
    threshold: f64,
) -> Result<QuantizationResult> {
    check_epsilon(epsilon)?;
    let target = target_phase(sector, n);
    if target == 0.0 {
        return Ok(QuantizationResult {
            n,
            sector,
            energy: 0.0,
            phase: 0.0,
            residual: 0.0,
            bracket_width: 0.0,
            iterations: 0,
        });
    }
    let max_phase = phase_integral(profile, epsilon, threshold)?;
    if max_phase < target {
        return Err(Error::AboveThreshold { n, target, max_phase });
    }
    let mut failure = None;
    let root = brent(
        |e| match phase_integral(profile, epsilon, e) {
            Ok(phi) => phi - target,
            Err(err) => {
                failure.get_or_insert(err);
                f64::NAN
            }
        },
        ENERGY_FLOOR,
        threshold,
        ENERGY_TOL,
    );
    if let Some(err) = failure {
        return Err(err);
    }
    let root = root?;
    let phase = phase_integral(profile, epsilon, root.root)?;
    Ok(QuantizationResult {
        n,
        sector,
        energy: root.root,
        phase,
        residual: phase - target,
        bracket_width: root.bracket_width,
        iterations: root.iterations,
    })
}

/// Every state whose target phase does not exceed `Φ(threshold)`.
pub fn bs_spectrum(
    profile: MassProfile,
    epsilon: f64,
    sector: Sector,
    threshold: f64,
) -> Result<Vec<QuantizationResult>> {
    let max_phase = phase_integral(profile, epsilon, threshold)?;
    let mut out = Vec::new();
    let mut n = 0;
    while target_phase(sector, n) <= max_phase {
        out.push(solve_bs_with_threshold(profile, epsilon, sector, n, threshold)?);
        n += 1;
    }
    Ok(out)
}

/// Weyl estimate `Φ(ℰ)/π` of the number of states below `ℰ`.
pub fn weyl_count(profile: MassProfile, epsilon: f64, energy: f64) -> Result<f64> {
    Ok(phase_integral(profile, epsilon, energy)? / PI)
}

/// Data fixing one WKB eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WkbParams {
    pub profile: MassProfile,
    pub epsilon: f64,
    pub sector: Sector,
    pub energy: f64,
    pub turning_points: TurningPoints,
    /// Index `k` with `Φ(ℰ) ≈ (k + (σ_D + 1)/2)π`; fixes the sign beyond `x₊`.
    pub index: usize,
    /// Overall constant `C`.
    pub amplitude: f64,
}

impl WkbParams {
    pub fn new(profile: MassProfile, epsilon: f64, sector: Sector, energy: f64) -> Result<Self> {
        let turning_points = turning_points(profile, energy)?;
        let phase = phase_integral(profile, epsilon, energy)?;
        let index = (phase / PI - sector.index_offset() as f64).round().max(0.0) as usize;
        Ok(Self {
            profile,
            epsilon,
            sector,
            energy,
            turning_points,
            index,
            amplitude: 1.0,
        })
    }

    /// Parameters for the `n`-th Bohr–Sommerfeld state.
    pub fn for_state(profile: MassProfile, epsilon: f64, sector: Sector, n: usize) -> Result<Self> {
        let q = solve_bs(profile, epsilon, sector, n)?;
        let mut p = Self::new(profile, epsilon, sector, q.energy)?;
        p.index = n;
        Ok(p)
    }

    pub fn exclusion_half_width(&self) -> f64 {
        EXCLUSION_FACTOR * self.epsilon.powf(2.0 / 3.0)
    }

    pub fn in_exclusion_zone(&self, x: f64) -> bool {
        let w = self.exclusion_half_width();
        (x - self.turning_points.x_minus).abs() < w || (x - self.turning_points.x_plus).abs() < w
    }

    /// Rescales `C` so the samples outside the exclusion zones have unit
    /// `h`-weighted norm.
    pub fn normalized(mut self, grid: &Grid) -> Result<Self> {
        self.amplitude = 1.0;
        let samples = wkb_samples(&self, grid)?;
        let norm = (grid.h * samples.iter().flatten().map(|v| v * v).sum::<f64>()).sqrt();
        if !(norm > 0.0) {
            return Err(Error::Domain("WKB samples vanish on the grid".into()));
        }
        self.amplitude = 1.0 / norm;
        Ok(self)
    }
}

/// `(1/ε) ∫ √|ℰ − m²|` between `lo` and `hi`.
fn action(params: &WkbParams, lo: f64, hi: f64) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let (profile, energy) = (params.profile, params.energy);
    let r = integrate_sqrt_endpoints(
        |x| (energy - profile.mass(x).powi(2)).abs().sqrt(),
        lo,
        hi,
        PHASE_TOL,
    )?;
    Ok(r.value / params.epsilon)
}

/// Outer WKB eigenfunction at `x`.
///
/// Between the turning points this is the standing wave
/// `C (ℰ − m²)^{−1/4} cos(φ_L − σρ/2 − (1 + σ)π/4)` with `ρ = arcsin(m/√ℰ)`;
/// outside it is the decaying branch
/// `±(C/2) (m² − ℰ)^{−1/4} e^{−κ} e^{−σ arccosh(|m|/√ℰ)/2}`.
pub fn wkb_eigenfunction(params: &WkbParams, x: f64) -> Result<f64> {
    let tp = params.turning_points;
    if params.in_exclusion_zone(x) {
        let turning_point = if (x - tp.x_minus).abs() < (x - tp.x_plus).abs() {
            tp.x_minus
        } else {
            tp.x_plus
        };
        return Err(Error::ExclusionZone {
            x,
            turning_point,
            half_width: params.exclusion_half_width(),
        });
    }
    let m = params.profile.mass(x);
    let sigma = params.sector.sign_f64();
    let root_e = params.energy.sqrt();
    let c = params.amplitude;
    if x > tp.x_minus && x < tp.x_plus {
        let phi = action(params, tp.x_minus, x)?;
        let rho = (m / root_e).clamp(-1.0, 1.0).asin();
        let q = params.energy - m * m;
        Ok(c * q.powf(-0.25) * (phi - 0.5 * sigma * rho - (1.0 + sigma) * FRAC_PI_4).cos())
    } else {
        let (kappa, sign) = if x <= tp.x_minus {
            (action(params, x, tp.x_minus)?, 1.0)
        } else {
            let sign = if params.index.is_multiple_of(2) { 1.0 } else { -1.0 };
            (action(params, tp.x_plus, x)?, sign)
        };
        let p = m * m - params.energy;
        let correction = (-0.5 * sigma * (m.abs() / root_e).max(1.0).acosh()).exp();
        Ok(sign * 0.5 * c * p.powf(-0.25) * (-kappa).exp() * correction)
    }
}

/// Samples on `grid`; `None` inside the exclusion zones.
pub fn wkb_samples(params: &WkbParams, grid: &Grid) -> Result<Vec<Option<f64>>> {
    grid.points()
        .into_iter()
        .map(|x| {
            if params.in_exclusion_zone(x) {
                Ok(None)
            } else {
                wkb_eigenfunction(params, x).map(Some)
            }
        })
        .collect()
}

/// Airy variable `ζ = λ^{1/3} ε^{−2/3} (x − x_τ)`, positive on the forbidden side.
pub fn airy_variable(params: &WkbParams, side: Side, x: f64) -> f64 {
    let (x_tau, lambda) = params.turning_points.at(side);
    lambda.cbrt() * params.epsilon.powf(-2.0 / 3.0) * (x - x_tau)
}

/// Inner solution `a Ai(ζ)` near one turning point, with `a` fixed by the
/// decaying outer branch.
pub fn airy_inner_solution(params: &WkbParams, side: Side, x: f64) -> Result<f64> {
    let (x_tau, lambda) = params.turning_points.at(side);
    if (x - x_tau).abs() > INNER_HALF_WIDTH {
        return Err(Error::Domain(format!(
            "x = {x} is outside the inner region |x - {x_tau}| <= {INNER_HALF_WIDTH}"
        )));
    }
    let sign = match side {
        Side::Left => 1.0,
        Side::Right if params.index.is_multiple_of(2) => 1.0,
        Side::Right => -1.0,
    };
    let a = sign * PI.sqrt() * params.amplitude * (lambda.abs() * params.epsilon).powf(-1.0 / 6.0);
    Ok(a * airy(airy_variable(params, side, x))?.ai)
}

/// `x` at which the Airy variable of `side` equals `zeta`.
pub fn x_from_airy_variable(params: &WkbParams, side: Side, zeta: f64) -> f64 {
    let (x_tau, lambda) = params.turning_points.at(side);
    x_tau + zeta * params.epsilon.powf(2.0 / 3.0) / lambda.cbrt()
}

/// `max |a Ai(ζ) − ψ_WKB| / max |ψ_WKB|` over `samples` points of
/// `ζ ∈ [zeta_lo, zeta_hi]`.
pub fn airy_overlap_error(
    params: &WkbParams,
    side: Side,
    zeta_lo: f64,
    zeta_hi: f64,
    samples: usize,
) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..samples.max(2) {
        let zeta = zeta_lo + (zeta_hi - zeta_lo) * i as f64 / (samples.max(2) - 1) as f64;
        let x = x_from_airy_variable(params, side, zeta);
        let inner = airy_inner_solution(params, side, x)?;
        let outer = wkb_eigenfunction(params, x)?;
        worst = worst.max((inner - outer).abs());
        scale = scale.max(outer.abs());
    }
    Ok(worst / scale)
}

/// `ε |m m′| / |ℰ − m²|^{3/2}`.
pub fn validity_margin(params: &WkbParams, x: f64) -> Result<f64> {
    let v = params.profile.eval(x);
    let gap = (params.energy - v.m * v.m).abs();
    if gap < 1e-14 {
        return Err(Error::DivergentAtTurningPoint { x });
    }
    Ok(params.epsilon * (v.m * v.dm).abs() / gap.powf(1.5))
}

/// `exp(−M(x)/ε)` on the grid with unit `h`-weighted norm.
pub fn zero_mode(profile: MassProfile, epsilon: f64, grid: &Grid) -> Result<Vec<f64>> {
    check_epsilon(epsilon)?;
    let mut psi: Vec<f64> = grid
        .points()
        .into_iter()
        .map(|x| (-profile.antiderivative(x) / epsilon).exp())
        .collect();
    let norm = (grid.h * psi.iter().map(|v| v * v).sum::<f64>()).sqrt();
    psi.iter_mut().for_each(|v| *v /= norm);
    Ok(psi)
}

/// `arcsin(m/√ℰ)`, the allowed-region correction phase.
pub fn correction_phase(params: &WkbParams, x: f64) -> f64 {
    (params.profile.mass(x) / params.energy.sqrt()).clamp(-1.0, 1.0).asin()
}

/// `π/2 − arcsin(m/√ℰ)`: the correction phase measured from the right turning point.
pub fn correction_phase_deficit(params: &WkbParams, x: f64) -> f64 {
    FRAC_PI_2 - correction_phase(params, x)
}
