//! Closed-form Pöschl–Teller spectrum for `m = tanh`.

use serde::{Deserialize, Serialize};

use crate::{check_epsilon, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PtSpectrum {
    pub epsilon: f64,
    /// `λ_k⁺ = 1 − (1 − εk)²`, `k = 0..=N`.
    pub upper: Vec<f64>,
    /// `λ_k⁻ = λ_{k+1}⁺`, `k = 0..N`.
    pub lower: Vec<f64>,
    /// `N = ⌊1/ε⌋`.
    pub n_cap: usize,
    /// Set when `1/ε` is an integer, so the top state sits at the continuum edge.
    pub threshold: bool,
}

/// `⌊1/ε⌋`, nudged so that exact reciprocals such as `1/0.1` count as integers.
pub fn n_cap(epsilon: f64) -> usize {
    (1.0 / epsilon + 1e-9).floor() as usize
}

/// `λ_k⁺ = 1 − (1 − εk)²`.
pub fn upper_eigenvalue(epsilon: f64, k: usize) -> f64 {
    let r = 1.0 - epsilon * k as f64;
    1.0 - r * r
}

pub fn pt_spectrum(epsilon: f64) -> Result<PtSpectrum> {
    check_epsilon(epsilon)?;
    let n = n_cap(epsilon);
    let upper: Vec<f64> = (0..=n).map(|k| upper_eigenvalue(epsilon, k)).collect();
    let lower = upper[1..].to_vec();
    let top = 1.0 - epsilon * n as f64;
    Ok(PtSpectrum {
        epsilon,
        upper,
        lower,
        n_cap: n,
        threshold: top.abs() < 1e-9,
    })
}

/// Bound-state counts of `D_ε²` (upper sector) and of `D_ε`.
pub fn pt_counts(epsilon: f64) -> Result<(usize, usize)> {
    check_epsilon(epsilon)?;
    let n = n_cap(epsilon);
    Ok((n + 1, 2 * n + 1))
}

/// Lowest gap `λ₁ − λ₀` and highest gap `λ_N − λ_{N−1}` of the upper sector.
pub fn pt_spacing_regimes(epsilon: f64) -> Result<(f64, f64)> {
    let s = pt_spectrum(epsilon)?;
    if s.n_cap < 4 {
        return Err(Error::Domain(format!(
            "spacing regimes need ⌊1/ε⌋ >= 4, got {} at ε = {epsilon}",
            s.n_cap
        )));
    }
    let n = s.n_cap;
    Ok((s.upper[1] - s.upper[0], s.upper[n] - s.upper[n - 1]))
}

/// Symmetric `D_ε` spectrum `{±√λ}` built from the upper-sector list.
pub fn dirac_eigenvalues(spectrum: &PtSpectrum) -> Vec<f64> {
    let mut out: Vec<f64> = spectrum.upper[1..].iter().map(|l| -l.sqrt()).rev().collect();
    out.push(0.0);
    out.extend(spectrum.upper[1..].iter().map(|l| l.sqrt()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_epsilon_table() {
        let s = pt_spectrum(0.5).unwrap();
        assert_eq!(s.upper, vec![0.0, 0.75, 1.0]);
        assert_eq!(s.lower, vec![0.75, 1.0]);
        assert!(s.threshold);
    }

    #[test]
    fn fifteen_hundredths() {
        let s = pt_spectrum(0.15).unwrap();
        assert_eq!(s.upper.len(), 7);
        assert!((s.upper[6] - 0.99).abs() < 1e-12);
        assert!(!s.threshold);
    }

    #[test]
    fn counts() {
        assert_eq!(pt_counts(0.5).unwrap(), (3, 5));
        assert_eq!(pt_counts(0.15).unwrap(), (7, 13));
        assert_eq!(pt_counts(0.999).unwrap(), (2, 3));
        assert_eq!(pt_counts(0.1).unwrap(), (11, 21));
        assert!(pt_counts(0.0).is_err());
        assert!(pt_counts(1.0).is_err());
    }

    #[test]
    fn spacing() {
        let (c, t) = pt_spacing_regimes(0.1).unwrap();
        assert!((c - 0.19).abs() < 1e-12);
        assert!((t - 0.01).abs() < 1e-12);
        let (c, t) = pt_spacing_regimes(0.05).unwrap();
        assert!((c - 0.1).abs() <= 0.05 * 0.1);
        assert!(t <= 4.0 * 0.05 * 0.05);
        assert!(pt_spacing_regimes(0.3).is_err());
    }

    #[test]
    fn invariants_over_epsilon_range() {
        let mut eps = 0.013;
        while eps < 1.0 {
            let s = pt_spectrum(eps).unwrap();
            assert_eq!(s.upper[0], 0.0);
            for (k, l) in s.lower.iter().enumerate() {
                assert_eq!(*l, s.upper[k + 1]);
            }
            for w in s.upper.windows(2) {
                assert!(w[1] > w[0]);
            }
            assert!(s.upper.iter().all(|&l| (0.0..=1.0 + 1e-12).contains(&l)));
            let d = dirac_eigenvalues(&s);
            let mirrored: Vec<f64> = d.iter().rev().map(|v| -v).collect();
            assert_eq!(d, mirrored);
            assert_eq!(d.len(), pt_counts(eps).unwrap().1);
            eps += 0.0173;
        }
    }
}
