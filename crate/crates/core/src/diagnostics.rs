//! Cross-checks between the exact, Bohr–Sommerfeld and finite-difference
//! routes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigen::fd_spectrum;
use crate::operator::Grid;
use crate::pt_exact::upper_eigenvalue;
use crate::wkb::{bs_spectrum, phase_integral, wkb_samples, WkbParams};
use crate::{Error, MassProfile, Result, Sector};

/// Energies below this are treated as the zero mode.
pub const ZERO_ENERGY: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCheckRow {
    pub n: usize,
    /// `Φ(ℰₙ)/π`, which should be close to `n + (σ_D + 1)/2`.
    pub phase_over_pi: f64,
    pub residual: f64,
}

/// Phase residuals `Φ(ℰₙ)/π − (n + (σ_D + 1)/2)` for a list of energies.
///
/// The list must exclude the zero mode; in the upper sector it therefore
/// starts at `n = 1`.
pub fn phase_check(
    profile: MassProfile,
    epsilon: f64,
    sector: Sector,
    energies: &[f64],
) -> Result<Vec<PhaseCheckRow>> {
    let first = match sector {
        Sector::Upper => 1,
        Sector::Lower => 0,
    };
    energies
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let n = first + i;
            let phase_over_pi = phase_integral(profile, epsilon, e)? / PI;
            Ok(PhaseCheckRow {
                n,
                phase_over_pi,
                residual: phase_over_pi - (n + sector.index_offset()) as f64,
            })
        })
        .collect()
}

/// [`phase_check`] on the finite-difference bound states of one sector.
pub fn phase_check_fd(
    profile: MassProfile,
    epsilon: f64,
    sector: Sector,
    grid: &Grid,
    threshold: f64,
) -> Result<Vec<PhaseCheckRow>> {
    let fd = fd_spectrum(profile, epsilon, sector, grid, threshold)?;
    let skip = match sector {
        Sector::Upper => 1,
        Sector::Lower => 0,
    };
    let energies: Vec<f64> = fd.values.into_iter().skip(skip).collect();
    phase_check(profile, epsilon, sector, &energies)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub profile: String,
    pub epsilon: f64,
    pub sigma_d: i32,
    pub n: usize,
    pub e_exact: Option<f64>,
    pub e_bs: Option<f64>,
    pub e_fd: Option<f64>,
    pub abs_diff: Option<f64>,
    pub phase_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumComparison {
    pub records: Vec<SpectrumRecord>,
    /// `(bs_count, fd_count)` when the two routes disagree on the count.
    pub count_mismatch: Option<(usize, usize)>,
}

fn exact_energy(profile: MassProfile, epsilon: f64, sector: Sector, n: usize) -> Option<f64> {
    (profile == MassProfile::Tanh).then(|| upper_eigenvalue(epsilon, n + sector.index_offset()))
}

/// `Φ(ℰ)/π − (n + (σ_D + 1)/2)`, with `Φ = 0` for the zero mode.
fn phase_residual(profile: MassProfile, epsilon: f64, sector: Sector, n: usize, energy: f64) -> Result<f64> {
    let phase = if energy <= ZERO_ENERGY {
        0.0
    } else {
        phase_integral(profile, epsilon, energy)?
    };
    Ok(phase / PI - (n + sector.index_offset()) as f64)
}

/// Bohr–Sommerfeld and finite-difference spectra of one sector aligned by rank.
pub fn compare_spectra(
    profile: MassProfile,
    epsilon: f64,
    sector: Sector,
    grid: &Grid,
    threshold: f64,
) -> Result<SpectrumComparison> {
    let bs = bs_spectrum(profile, epsilon, sector, threshold)?;
    let fd = fd_spectrum(profile, epsilon, sector, grid, threshold)?;
    let count = bs.len().min(fd.len());
    let records = (0..count)
        .map(|n| {
            let e_bs = bs[n].energy;
            let e_fd = fd.values[n];
            Ok(SpectrumRecord {
                profile: profile.name().to_string(),
                epsilon,
                sigma_d: sector.sign(),
                n,
                e_exact: exact_energy(profile, epsilon, sector, n),
                e_bs: Some(e_bs),
                e_fd: Some(e_fd),
                abs_diff: Some((e_bs - e_fd).abs()),
                phase_residual: Some(phase_residual(profile, epsilon, sector, n, e_fd)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let count_mismatch = (bs.len() != fd.len()).then_some((bs.len(), fd.len()));
    Ok(SpectrumComparison { records, count_mismatch })
}

/// Bohr–Sommerfeld records only.
pub fn bs_records(profile: MassProfile, epsilon: f64, sector: Sector, threshold: f64) -> Result<Vec<SpectrumRecord>> {
    Ok(bs_spectrum(profile, epsilon, sector, threshold)?
        .into_iter()
        .map(|q| SpectrumRecord {
            profile: profile.name().to_string(),
            epsilon,
            sigma_d: sector.sign(),
            n: q.n,
            e_exact: exact_energy(profile, epsilon, sector, q.n),
            e_bs: Some(q.energy),
            e_fd: None,
            abs_diff: None,
            phase_residual: Some(q.residual / PI),
        })
        .collect())
}

/// Finite-difference records only.
pub fn fd_records(
    profile: MassProfile,
    epsilon: f64,
    sector: Sector,
    grid: &Grid,
    threshold: f64,
) -> Result<Vec<SpectrumRecord>> {
    let fd = fd_spectrum(profile, epsilon, sector, grid, threshold)?;
    fd.values
        .iter()
        .enumerate()
        .map(|(n, &e)| {
            Ok(SpectrumRecord {
                profile: profile.name().to_string(),
                epsilon,
                sigma_d: sector.sign(),
                n,
                e_exact: exact_energy(profile, epsilon, sector, n),
                e_bs: None,
                e_fd: Some(e),
                abs_diff: None,
                phase_residual: Some(phase_residual(profile, epsilon, sector, n, e)?),
            })
        })
        .collect()
}

/// Spectrum `{±√ℰ}` of the first-order operator from squared-operator
/// records, sorted, with near-equal values (within `merge_tol`) merged and the
/// zero mode counted once.
pub fn dirac_spectrum(records: &[SpectrumRecord], merge_tol: f64) -> Vec<f64> {
    let mut roots: Vec<f64> = records
        .iter()
        .filter_map(|r| r.e_fd.or(r.e_bs))
        .map(|e| if e <= ZERO_ENERGY { 0.0 } else { e.sqrt() })
        .collect();
    roots.sort_by(f64::total_cmp);
    let mut distinct: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        match distinct.last() {
            Some(&last) if (r - last).abs() <= merge_tol => {}
            _ => distinct.push(r),
        }
    }
    let mut out: Vec<f64> = distinct.iter().rev().filter(|&&r| r > 0.0).map(|r| -r).collect();
    out.extend(distinct);
    out
}

/// `h`-weighted L² distance between two sampled functions over the points
/// where `excluded` is false, after normalizing both there and aligning the
/// global sign.
pub fn eigenfunction_overlap_error(fd: &[f64], wkb: &[f64], excluded: &[bool], h: f64) -> Result<f64> {
    if wkb.len() != fd.len() {
        return Err(Error::DimensionMismatch { expected: fd.len(), got: wkb.len() });
    }
    if excluded.len() != fd.len() {
        return Err(Error::DimensionMismatch { expected: fd.len(), got: excluded.len() });
    }
    let kept = || (0..fd.len()).filter(|&i| !excluded[i]);
    let norm = |v: &[f64]| (h * kept().map(|i| v[i] * v[i]).sum::<f64>()).sqrt();
    let (nf, nw) = (norm(fd), norm(wkb));
    if !(nf > 0.0 && nw > 0.0) {
        return Err(Error::Domain("cannot normalize a vanishing sample set".into()));
    }
    let inner: f64 = kept().map(|i| fd[i] * wkb[i]).sum();
    let sign = if inner < 0.0 { -1.0 } else { 1.0 };
    Ok((h * kept().map(|i| (fd[i] / nf - sign * wkb[i] / nw).powi(2)).sum::<f64>()).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenfunctionComparison {
    pub x: Vec<f64>,
    pub psi_fd: Vec<f64>,
    /// `None` inside the turning-point exclusion zones.
    pub psi_wkb: Vec<Option<f64>>,
    pub energy_fd: f64,
    pub energy_bs: f64,
    pub error: f64,
}

/// Finite-difference eigenvector `n` of one sector next to its WKB
/// approximation, both normalized outside the exclusion zones.
pub fn eigenfunction_comparison(
    profile: MassProfile,
    epsilon: f64,
    sector: Sector,
    n: usize,
    grid: &Grid,
) -> Result<EigenfunctionComparison> {
    let params = WkbParams::for_state(profile, epsilon, sector, n)?;
    if params.energy <= 0.0 {
        return Err(Error::Domain("the zero mode has no oscillatory WKB form".into()));
    }
    let params = params.normalized(grid)?;
    let fd = fd_spectrum(profile, epsilon, sector, grid, profile.continuum_threshold())?;
    let Some(vector) = fd.vectors.get(n) else {
        return Err(Error::Domain(format!(
            "finite differences found only {} bound states, state {n} requested",
            fd.len()
        )));
    };
    let samples = wkb_samples(&params, grid)?;
    let excluded: Vec<bool> = samples.iter().map(Option::is_none).collect();
    let dense: Vec<f64> = samples.iter().map(|v| v.unwrap_or(0.0)).collect();
    let error = eigenfunction_overlap_error(vector, &dense, &excluded, grid.h)?;

    // present the finite-difference vector with the same normalization and sign
    let norm = (grid.h * (0..grid.n).filter(|&i| !excluded[i]).map(|i| vector[i] * vector[i]).sum::<f64>()).sqrt();
    let inner: f64 = (0..grid.n).filter(|&i| !excluded[i]).map(|i| vector[i] * dense[i]).sum();
    let scale = if inner < 0.0 { -1.0 / norm } else { 1.0 / norm };
    Ok(EigenfunctionComparison {
        x: grid.points(),
        psi_fd: vector.iter().map(|v| v * scale).collect(),
        psi_wkb: samples,
        energy_fd: fd.values[n],
        energy_bs: params.energy,
        error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::default_grid;
    use crate::pt_exact::pt_spectrum;

    #[test]
    fn phase_check_on_exact_tanh_levels() {
        for eps in [0.5, 0.15, 0.05] {
            let s = pt_spectrum(eps).unwrap();
            let upper: Vec<f64> = s.upper[1..].iter().copied().filter(|&e| e < 0.999).collect();
            let lower: Vec<f64> = s.lower.iter().copied().filter(|&e| e < 0.999).collect();
            for (sector, list) in [(Sector::Upper, upper), (Sector::Lower, lower)] {
                for row in phase_check(MassProfile::Tanh, eps, sector, &list).unwrap() {
                    assert!(row.residual.abs() <= 1e-8, "ε = {eps}: {row:?}");
                }
            }
        }
    }

    #[test]
    fn phase_check_fd_bounds() {
        let grid = default_grid(0.15).unwrap();
        let tanh = phase_check_fd(MassProfile::Tanh, 0.15, Sector::Upper, &grid, 0.999).unwrap();
        assert_eq!(tanh.len(), 6);
        assert!(tanh.iter().all(|r| r.residual.abs() <= 1e-4), "{tanh:?}");
        let erf = phase_check_fd(MassProfile::Erf, 0.15, Sector::Upper, &grid, 0.999).unwrap();
        assert!(erf.iter().all(|r| r.residual.abs() <= 0.15), "{erf:?}");
    }

    #[test]
    fn compare_examples() {
        let g = default_grid(0.5).unwrap();
        let c = compare_spectra(MassProfile::Tanh, 0.5, Sector::Upper, &g, 0.999).unwrap();
        assert_eq!(c.records.len(), 2);
        assert!(c.count_mismatch.is_none());

        let g = default_grid(0.15).unwrap();
        let c = compare_spectra(MassProfile::Tanh, 0.15, Sector::Upper, &g, 0.999).unwrap();
        assert_eq!(c.records.len(), 7);
        for (n, r) in c.records.iter().enumerate() {
            assert_eq!(r.n, n);
            assert!((r.e_bs.unwrap() - r.e_exact.unwrap()).abs() <= 1e-9);
            assert!(r.phase_residual.unwrap().is_finite());
        }

        let c = compare_spectra(MassProfile::AlgebraicSigmoid, 0.15, Sector::Upper, &g, 0.999).unwrap();
        let len = c.records.len();
        for r in &c.records[..len - 1] {
            assert!(r.abs_diff.unwrap() <= 0.5 * 0.15, "{r:?}");
        }
    }

    fn bs_record(e: f64) -> SpectrumRecord {
        SpectrumRecord {
            profile: "tanh".into(),
            epsilon: 0.5,
            sigma_d: -1,
            n: 0,
            e_exact: None,
            e_bs: Some(e),
            e_fd: None,
            abs_diff: None,
            phase_residual: None,
        }
    }

    #[test]
    fn dirac_spectrum_is_symmetric() {
        let d = dirac_spectrum(&[bs_record(0.0), bs_record(0.75)], 1e-6);
        assert_eq!(d.len(), 3);
        assert!((d[0] + 0.8660254).abs() < 1e-7 && d[1] == 0.0 && (d[2] - 0.8660254).abs() < 1e-7);

        for eps in [0.15, 0.12, 0.3] {
            let mut records = bs_records(MassProfile::Tanh, eps, Sector::Upper, 0.999).unwrap();
            records.extend(bs_records(MassProfile::Tanh, eps, Sector::Lower, 0.999).unwrap());
            let d = dirac_spectrum(&records, 1e-6);
            let mirrored: Vec<f64> = d.iter().rev().map(|v| -v).collect();
            assert_eq!(d, mirrored);
            assert_eq!(d.len(), crate::pt_exact::pt_counts(eps).unwrap().1);
        }
    }

    #[test]
    fn overlap_error_basics() {
        let v = vec![0.1, 0.5, -0.3, 0.2];
        let flipped: Vec<f64> = v.iter().map(|x| -x).collect();
        let mask = vec![false; 4];
        assert!(eigenfunction_overlap_error(&v, &v, &mask, 0.5).unwrap() < 1e-15);
        assert!(eigenfunction_overlap_error(&v, &flipped, &mask, 0.5).unwrap() < 1e-15);
        assert!(eigenfunction_overlap_error(&v, &v[..3], &mask, 0.5).is_err());
        let mut other = v.clone();
        other[3] = 100.0;
        let masked = [false, false, false, true];
        assert!(eigenfunction_overlap_error(&v, &other, &masked, 0.5).unwrap() < 1e-15);
    }

    #[test]
    fn eigenfunction_error_small_for_tanh() {
        let mut errors = Vec::new();
        for eps in [0.1, 0.05] {
            let grid = default_grid(eps).unwrap();
            let c = eigenfunction_comparison(MassProfile::Tanh, eps, Sector::Upper, 2, &grid).unwrap();
            errors.push(c.error);
        }
        eprintln!("{errors:?}");
        assert!(errors[0] <= 0.15 && errors[1] < errors[0]);
    }
}
