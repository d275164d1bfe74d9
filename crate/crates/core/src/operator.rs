//! Five-point finite-difference discretization of the sectors
//! `H_σ = −ε²∂² + m² + σ ε m′` on a uniform grid with Dirichlet truncation.

use serde::{Deserialize, Serialize};

use crate::{check_epsilon, Error, MassProfile, Result, Sector};

pub const DEFAULT_DOMAIN: (f64, f64) = (-12.0, 12.0);
pub const MIN_DEFAULT_POINTS: usize = 1200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub h: f64,
}

impl Grid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 5 {
            return Err(Error::Domain(format!("grid needs at least 5 points, got {n}")));
        }
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!("grid needs a < b, got [{a}, {b}]")));
        }
        Ok(Self { a, b, n, h: (b - a) / (n - 1) as f64 })
    }

    pub fn x(&self, i: usize) -> f64 {
        self.a + self.h * i as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }
}

/// `[−12, 12]` with `max(1200, ⌊120/ε⌋ + 1)` points.
pub fn default_grid(epsilon: f64) -> Result<Grid> {
    check_epsilon(epsilon)?;
    let n = MIN_DEFAULT_POINTS.max((120.0 / epsilon + 1e-9).floor() as usize + 1);
    Grid::new(DEFAULT_DOMAIN.0, DEFAULT_DOMAIN.1, n)
}

/// Symmetric pentadiagonal matrix stored as its upper bands.
///
/// `weight` is the quadrature weight of the discrete inner product (the grid
/// spacing for discretized operators, 1 for plain matrices).
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymmetricMatrix {
    pub diag: Vec<f64>,
    /// `off1[i] = A[i][i+1]`, length `n − 1`.
    pub off1: Vec<f64>,
    /// `off2[i] = A[i][i+2]`, length `n − 2`.
    pub off2: Vec<f64>,
    pub weight: f64,
}

impl BandedSymmetricMatrix {
    pub fn from_bands(diag: Vec<f64>, off1: Vec<f64>, off2: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::Domain("matrix dimension must be positive".into()));
        }
        if off1.len() != n.saturating_sub(1) {
            return Err(Error::DimensionMismatch { expected: n.saturating_sub(1), got: off1.len() });
        }
        if off2.len() != n.saturating_sub(2) {
            return Err(Error::DimensionMismatch { expected: n.saturating_sub(2), got: off2.len() });
        }
        if diag.iter().chain(&off1).chain(&off2).any(|v| !v.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { diag, off1, off2, weight: 1.0 })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Entry `A[i][j]` (zero outside the band).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        match j - i {
            0 => self.diag[i],
            1 => self.off1[i],
            2 => self.off2[i],
            _ => 0.0,
        }
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.n();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        let mut y: Vec<f64> = self.diag.iter().zip(v).map(|(d, x)| d * x).collect();
        for i in 0..n.saturating_sub(1) {
            y[i] += self.off1[i] * v[i + 1];
            y[i + 1] += self.off1[i] * v[i];
        }
        for i in 0..n.saturating_sub(2) {
            y[i] += self.off2[i] * v[i + 2];
            y[i + 2] += self.off2[i] * v[i];
        }
        Ok(y)
    }

    /// Maximum absolute row sum.
    pub fn norm1(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|i| {
                (i.saturating_sub(2)..(i + 3).min(n))
                    .map(|j| self.get(i, j).abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }
}

/// Potential `m² + σ ε m′` of one sector.
pub fn sector_potential(profile: MassProfile, epsilon: f64, sector: Sector, x: f64) -> f64 {
    let v = profile.eval(x);
    v.m * v.m + sector.sign_f64() * epsilon * v.dm
}

pub fn build_sector(
    profile: MassProfile,
    epsilon: f64,
    sector: Sector,
    grid: &Grid,
) -> Result<BandedSymmetricMatrix> {
    check_epsilon(epsilon)?;
    let n = grid.n;
    let kinetic = epsilon * epsilon / (grid.h * grid.h);
    let diag = (0..n)
        .map(|i| 2.5 * kinetic + sector_potential(profile, epsilon, sector, grid.x(i)))
        .collect();
    let mut matrix = BandedSymmetricMatrix::from_bands(
        diag,
        vec![-4.0 / 3.0 * kinetic; n - 1],
        vec![kinetic / 12.0; n - 2],
    )?;
    matrix.weight = grid.h;
    Ok(matrix)
}

/// `√(h Σ vᵢ²)`.
pub fn weighted_norm(v: &[f64], weight: f64) -> f64 {
    (weight * v.iter().map(|x| x * x).sum::<f64>()).sqrt()
}
