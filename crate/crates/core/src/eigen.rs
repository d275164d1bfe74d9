//! Lowest eigenpairs of a symmetric pentadiagonal matrix.
//!
//! The band is reduced to tridiagonal form by Givens rotations with bulge
//! chasing, eigenvalues are isolated by Sturm-sequence bisection, and vectors
//! come from inverse iteration on the original band.

use crate::operator::{build_sector, weighted_norm, BandedSymmetricMatrix, Grid};
use crate::{Error, MassProfile, Result, Sector};

const MAX_INVERSE_ITERATIONS: usize = 10;
const RESIDUAL_FACTOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

impl EigenResult {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Upper band of width 3 (one slot of headroom for the bulge).
struct WorkBand {
    rows: Vec<[f64; 4]>,
}

impl WorkBand {
    fn new(m: &BandedSymmetricMatrix) -> Self {
        let n = m.n();
        let rows = (0..n)
            .map(|i| {
                let mut r = [0.0; 4];
                r[0] = m.diag[i];
                if i + 1 < n {
                    r[1] = m.off1[i];
                }
                if i + 2 < n {
                    r[2] = m.off2[i];
                }
                r
            })
            .collect();
        Self { rows }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if j - i > 3 {
            0.0
        } else {
            self.rows[i][j - i]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if j - i <= 3 {
            self.rows[i][j - i] = v;
        } else {
            debug_assert!(v.abs() < 1e-300 || v == 0.0);
        }
    }

    /// `A ← G A Gᵀ` in the plane `(p, p+1)` with `G = [[c, s], [−s, c]]`.
    fn rotate(&mut self, p: usize, c: f64, s: f64) {
        let q = p + 1;
        let n = self.rows.len();
        let lo = p.saturating_sub(3);
        let hi = (q + 3).min(n - 1);
        for j in lo..=hi {
            if j == p || j == q {
                continue;
            }
            let (apj, aqj) = (self.get(p, j), self.get(q, j));
            if apj == 0.0 && aqj == 0.0 {
                continue;
            }
            self.set(p, j, c * apj + s * aqj);
            self.set(q, j, -s * apj + c * aqj);
        }
        let (app, aqq, apq) = (self.get(p, p), self.get(q, q), self.get(p, q));
        let cs = c * s;
        self.set(p, p, c * c * app + 2.0 * cs * apq + s * s * aqq);
        self.set(q, q, s * s * app - 2.0 * cs * apq + c * c * aqq);
        self.set(p, q, cs * (aqq - app) + (c * c - s * s) * apq);
    }

    /// Rotates in `(q−1, q)` so that `A[q][j]` vanishes.
    fn annihilate(&mut self, q: usize, j: usize) {
        let p = q - 1;
        let (x, y) = (self.get(p, j), self.get(q, j));
        if y == 0.0 {
            return;
        }
        let r = x.hypot(y);
        self.rotate(p, x / r, y / r);
        self.set(q, j, 0.0);
    }

    /// Pentadiagonal to tridiagonal; returns `(diag, off)`.
    fn tridiagonalize(mut self) -> (Vec<f64>, Vec<f64>) {
        let n = self.rows.len();
        for k in 0..n.saturating_sub(2) {
            self.annihilate(k + 2, k);
            // the rotation leaves a bulge at (k+1, k+4); chase it off the end
            let mut row = k + 1;
            while row + 3 < n {
                self.annihilate(row + 3, row);
                row += 2;
            }
        }
        let diag = self.rows.iter().map(|r| r[0]).collect();
        let off = self.rows[..n - 1].iter().map(|r| r[1]).collect();
        (diag, off)
    }
}

/// Number of eigenvalues of the tridiagonal `(d, e)` strictly below `x`.
fn sturm_count(d: &[f64], e2: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        q = d[i] - x - e2[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` smallest eigenvalues of the tridiagonal `(d, e)` by bisection.
fn tridiagonal_lowest(d: &[f64], e: &[f64], k: usize) -> Vec<f64> {
    let n = d.len();
    let e2: Vec<f64> = e.iter().map(|x| x * x).collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * scale);
    lo -= 2.0 * f64::EPSILON * scale;
    hi += 2.0 * f64::EPSILON * scale;

    let mut values = Vec::with_capacity(k);
    let mut left = lo;
    for index in 0..k {
        let (mut a, mut b) = (left, hi);
        loop {
            let mid = 0.5 * (a + b);
            if b - a <= 2.0 * f64::EPSILON * (a.abs().max(b.abs())) + pivmin || mid <= a || mid >= b {
                break;
            }
            if sturm_count(d, &e2, mid, pivmin) > index {
                b = mid;
            } else {
                a = mid;
            }
        }
        let value = 0.5 * (a + b);
        values.push(value);
        left = a;
    }
    values
}

/// LU factors with partial pivoting of `A − σI` for pentadiagonal `A`.
struct BandLu {
    /// `upper[k][t]` is `U[k][k+t]`, `t = 0..5`.
    upper: Vec<[f64; 5]>,
    /// `lower[k][j−1]` is the multiplier eliminating row `k+j`.
    lower: Vec<[f64; 2]>,
    swap: Vec<usize>,
}

impl BandLu {
    fn factor(m: &BandedSymmetricMatrix, shift: f64, tiny: f64) -> Self {
        let n = m.n();
        // row p holds columns p−2 ..= p+4 in slots 0..7
        let mut work: Vec<[f64; 7]> = (0..n)
            .map(|p| {
                let mut r = [0.0; 7];
                for (slot, value) in r.iter_mut().enumerate().take(5) {
                    let col = p as isize - 2 + slot as isize;
                    if col >= 0 && (col as usize) < n {
                        *value = m.get(p, col as usize);
                    }
                }
                r[2] -= shift;
                r
            })
            .collect();
        let mut upper = vec![[0.0; 5]; n];
        let mut lower = vec![[0.0; 2]; n];
        let mut swap = vec![0; n];
        for k in 0..n {
            let rows = (n - k).min(3);
            let mut w = [[0.0; 5]; 3];
            for j in 0..rows {
                let start = 2 - j;
                w[j].copy_from_slice(&work[k + j][start..start + 5]);
            }
            let pivot = (0..rows)
                .max_by(|&a, &b| w[a][0].abs().total_cmp(&w[b][0].abs()))
                .unwrap_or(0);
            w.swap(0, pivot);
            swap[k] = pivot;
            if w[0][0].abs() < tiny {
                w[0][0] = if w[0][0] < 0.0 { -tiny } else { tiny };
            }
            for j in 1..rows {
                let mult = w[j][0] / w[0][0];
                lower[k][j - 1] = mult;
                for t in 0..5 {
                    w[j][t] -= mult * w[0][t];
                }
            }
            upper[k] = w[0];
            for j in 1..rows {
                let start = 2 - j;
                work[k + j][start..start + 5].copy_from_slice(&w[j]);
            }
        }
        Self { upper, lower, swap }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for k in 0..n {
            b.swap(k, k + self.swap[k]);
            for j in 1..3.min(n - k) {
                b[k + j] -= self.lower[k][j - 1] * b[k];
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for t in 1..5.min(n - k) {
                s -= self.upper[k][t] * b[k + t];
            }
            b[k] = s / self.upper[k][0];
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn euclidean_normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Deterministic start vector with no particular symmetry.
fn start_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ seed.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

fn residual_norm(m: &BandedSymmetricMatrix, v: &[f64], lambda: f64) -> f64 {
    let hv = m.matvec(v).expect("dimension checked by caller");
    hv.iter().zip(v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt()
}

/// The `k` algebraically smallest eigenpairs, ascending.
///
/// Vectors are normalized in the weighted norm `√(w Σ vᵢ²)` with
/// `w = matrix.weight`, and their largest-magnitude entry is positive.
pub fn lowest_eigenpairs(matrix: &BandedSymmetricMatrix, k: usize) -> Result<EigenResult> {
    let n = matrix.n();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("requested {k} eigenpairs of a {n}x{n} matrix")));
    }
    let (d, e) = WorkBand::new(matrix).tridiagonalize();
    let values = tridiagonal_lowest(&d, &e, k);

    let norm = matrix.norm1();
    let tiny = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
    let cluster = 1e-3 * norm;
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for (index, &lambda) in values.iter().enumerate() {
        let lu = BandLu::factor(matrix, lambda, tiny);
        let mut v = start_vector(n, index as u64);
        euclidean_normalize(&mut v);
        let goal = RESIDUAL_FACTOR * 1e-2 * (lambda.abs() + norm);
        let mut converged = false;
        for _ in 0..MAX_INVERSE_ITERATIONS {
            lu.solve(&mut v);
            for (prev, &mu) in vectors.iter().zip(&values) {
                if (mu - lambda).abs() < cluster {
                    let overlap = dot(prev, &v);
                    v.iter_mut().zip(prev).for_each(|(x, p)| *x -= overlap * p);
                }
            }
            if euclidean_normalize(&mut v) == 0.0 {
                v = start_vector(n, index as u64 + 1000);
                euclidean_normalize(&mut v);
                continue;
            }
            if residual_norm(matrix, &v, lambda) <= goal {
                converged = true;
                break;
            }
        }
        let euclidean_residual = residual_norm(matrix, &v, lambda);
        if !converged && euclidean_residual > RESIDUAL_FACTOR * (lambda.abs() + norm) {
            return Err(Error::ConvergenceFailure { index });
        }
        vectors.push(v);
        residuals.push(euclidean_residual);
    }

    // switch from unit Euclidean vectors to the weighted normalization
    let scale = 1.0 / matrix.weight.sqrt();
    let vectors_out = vectors
        .into_iter()
        .map(|mut v| {
            let (imax, _) = v
                .iter()
                .enumerate()
                .fold((0, 0.0), |(bi, bv), (i, x)| if x.abs() > bv { (i, x.abs()) } else { (bi, bv) });
            let sign = if v[imax] < 0.0 { -scale } else { scale };
            v.iter_mut().for_each(|x| *x *= sign);
            v
        })
        .collect();
    // the residual of a weighted-unit vector in the weighted norm equals the
    // Euclidean residual of the Euclidean-unit vector
    Ok(EigenResult { values, vectors: vectors_out, residuals })
}

/// Keeps the pairs with eigenvalue strictly below `threshold`.
pub fn filter_bound_states(result: &EigenResult, threshold: f64) -> EigenResult {
    let keep: Vec<usize> = (0..result.len()).filter(|&i| result.values[i] < threshold).collect();
    EigenResult {
        values: keep.iter().map(|&i| result.values[i]).collect(),
        vectors: keep.iter().filter_map(|&i| result.vectors.get(i).cloned()).collect(),
        residuals: keep.iter().filter_map(|&i| result.residuals.get(i).copied()).collect(),
    }
}

/// Bound states of one sector below `threshold`.
///
/// Starts from `⌊1/ε⌋ + 2` eigenpairs and doubles the request while every
/// computed value is still below the threshold.
pub fn fd_spectrum(
    profile: MassProfile,
    epsilon: f64,
    sector: Sector,
    grid: &Grid,
    threshold: f64,
) -> Result<EigenResult> {
    let matrix = build_sector(profile, epsilon, sector, grid)?;
    let n = matrix.n();
    let mut k = ((1.0 / epsilon + 1e-9).floor() as usize + 2).min(n);
    loop {
        let result = lowest_eigenpairs(&matrix, k)?;
        if result.values.last().is_some_and(|&v| v >= threshold) || k == n {
            return Ok(filter_bound_states(&result, threshold));
        }
        k = (2 * k).min(n);
    }
}

/// Weighted norm of `v` for a discretized operator.
pub fn grid_norm(v: &[f64], grid: &Grid) -> f64 {
    weighted_norm(v, grid.h)
}
