//! Python bindings for `dirac_wkb`.

use dirac_wkb::diagnostics as diag;
use dirac_wkb::operator::{self, DEFAULT_DOMAIN};
use dirac_wkb::{eigen, pt_exact, specfun, wkb, Error, MassProfile, Sector, DEFAULT_THRESHOLD};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain(_)
        | Error::BadBracket { .. }
        | Error::DimensionMismatch { .. }
        | Error::AboveThreshold { .. }
        | Error::ExclusionZone { .. }
        | Error::DivergentAtTurningPoint { .. } => PyValueError::new_err(e.to_string()),
        Error::NoConvergence { .. } | Error::ConvergenceFailure { .. } => PyRuntimeError::new_err(e.to_string()),
    }
}

fn profile(name: &str) -> PyResult<MassProfile> {
    name.parse().map_err(to_py)
}

fn sector(sigma: i32) -> PyResult<Sector> {
    Sector::from_sign(sigma).map_err(to_py)
}

/// Uniform grid on `[a, b]` with `n` points.
#[pyclass(name = "Grid", module = "dirac_wkb_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGrid(operator::Grid);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(a: f64, b: f64, n: usize) -> PyResult<Self> {
        operator::Grid::new(a, b, n).map(Self).map_err(to_py)
    }

    /// Default grid for `epsilon`: `[-12, 12]` with at least 1200 points.
    #[staticmethod]
    fn default(epsilon: f64) -> PyResult<Self> {
        operator::default_grid(epsilon).map(Self).map_err(to_py)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a
    }

    #[getter]
    fn b(&self) -> f64 {
        self.0.b
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn h(&self) -> f64 {
        self.0.h
    }

    fn points(&self) -> Vec<f64> {
        self.0.points()
    }

    fn __len__(&self) -> usize {
        self.0.n
    }

    fn __repr__(&self) -> String {
        format!("Grid(a={}, b={}, n={})", self.0.a, self.0.b, self.0.n)
    }
}

fn grid_or_default(grid: Option<&PyGrid>, epsilon: f64) -> PyResult<operator::Grid> {
    match grid {
        Some(g) => Ok(g.0),
        None => operator::default_grid(epsilon).map_err(to_py),
    }
}

#[pyclass(name = "SpectrumRecord", module = "dirac_wkb_py", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PySpectrumRecord {
    profile: String,
    epsilon: f64,
    sigma_d: i32,
    n: usize,
    e_exact: Option<f64>,
    e_bs: Option<f64>,
    e_fd: Option<f64>,
    abs_diff: Option<f64>,
    phase_residual: Option<f64>,
}

impl From<diag::SpectrumRecord> for PySpectrumRecord {
    fn from(r: diag::SpectrumRecord) -> Self {
        Self {
            profile: r.profile,
            epsilon: r.epsilon,
            sigma_d: r.sigma_d,
            n: r.n,
            e_exact: r.e_exact,
            e_bs: r.e_bs,
            e_fd: r.e_fd,
            abs_diff: r.abs_diff,
            phase_residual: r.phase_residual,
        }
    }
}

#[pymethods]
impl PySpectrumRecord {
    fn __repr__(&self) -> String {
        format!(
            "SpectrumRecord(profile={:?}, epsilon={}, sigma_d={}, n={}, e_exact={:?}, e_bs={:?}, e_fd={:?})",
            self.profile, self.epsilon, self.sigma_d, self.n, self.e_exact, self.e_bs, self.e_fd
        )
    }
}

/// Bohr–Sommerfeld solution for one state.
#[pyclass(name = "Quantization", module = "dirac_wkb_py", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
struct PyQuantization {
    n: usize,
    sigma_d: i32,
    energy: f64,
    phase: f64,
    residual: f64,
    iterations: usize,
}

impl From<wkb::QuantizationResult> for PyQuantization {
    fn from(q: wkb::QuantizationResult) -> Self {
        Self {
            n: q.n,
            sigma_d: q.sector.sign(),
            energy: q.energy,
            phase: q.phase,
            residual: q.residual,
            iterations: q.iterations,
        }
    }
}

#[pymethods]
impl PyQuantization {
    fn __repr__(&self) -> String {
        format!("Quantization(n={}, sigma_d={}, energy={})", self.n, self.sigma_d, self.energy)
    }
}

/// `(m, m', m'')` at `x`.
#[pyfunction]
fn mass(profile_name: &str, x: f64) -> PyResult<(f64, f64, f64)> {
    let v = profile(profile_name)?.eval(x);
    Ok((v.m, v.dm, v.d2m))
}

/// Antiderivative `M(x)` of the mass with `M(0) = 0`.
#[pyfunction]
fn antiderivative(profile_name: &str, x: f64) -> PyResult<f64> {
    Ok(profile(profile_name)?.antiderivative(x))
}

/// `(Ai(z), Ai'(z))`.
#[pyfunction]
fn airy(z: f64) -> PyResult<(f64, f64)> {
    let v = specfun::airy(z).map_err(to_py)?;
    Ok((v.ai, v.ai_prime))
}

/// Closed-form tanh spectra `(upper, lower)` below the continuum.
#[pyfunction]
fn pt_spectrum(epsilon: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let s = pt_exact::pt_spectrum(epsilon).map_err(to_py)?;
    Ok((s.upper, s.lower))
}

#[pyfunction]
fn turning_points(profile_name: &str, energy: f64) -> PyResult<(f64, f64)> {
    let tp = wkb::turning_points(profile(profile_name)?, energy).map_err(to_py)?;
    Ok((tp.x_minus, tp.x_plus))
}

/// `Φ(ℰ) = ε⁻¹ ∫ √(ℰ − m²) dx` over the classically allowed interval.
#[pyfunction]
fn phase_integral(profile_name: &str, epsilon: f64, energy: f64) -> PyResult<f64> {
    wkb::phase_integral(profile(profile_name)?, epsilon, energy).map_err(to_py)
}

#[pyfunction]
fn weyl_count(profile_name: &str, epsilon: f64, energy: f64) -> PyResult<f64> {
    wkb::weyl_count(profile(profile_name)?, epsilon, energy).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (profile_name, epsilon, sigma, n))]
fn solve_bs(profile_name: &str, epsilon: f64, sigma: i32, n: usize) -> PyResult<PyQuantization> {
    wkb::solve_bs(profile(profile_name)?, epsilon, sector(sigma)?, n)
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (profile_name, epsilon, sigma, threshold = DEFAULT_THRESHOLD))]
fn bs_spectrum(profile_name: &str, epsilon: f64, sigma: i32, threshold: f64) -> PyResult<Vec<f64>> {
    let qs = wkb::bs_spectrum(profile(profile_name)?, epsilon, sector(sigma)?, threshold).map_err(to_py)?;
    Ok(qs.into_iter().map(|q| q.energy).collect())
}

/// Finite-difference bound states of one sector as `(values, vectors)`.
#[pyfunction]
#[pyo3(signature = (profile_name, epsilon, sigma, grid = None, threshold = DEFAULT_THRESHOLD))]
fn fd_spectrum(
    py: Python<'_>,
    profile_name: &str,
    epsilon: f64,
    sigma: i32,
    grid: Option<&PyGrid>,
    threshold: f64,
) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let (p, s) = (profile(profile_name)?, sector(sigma)?);
    let grid = grid_or_default(grid, epsilon)?;
    let r = py
        .detach(|| eigen::fd_spectrum(p, epsilon, s, &grid, threshold))
        .map_err(to_py)?;
    Ok((r.values, r.vectors))
}

#[pyfunction]
#[pyo3(signature = (profile_name, epsilon, sigma, grid = None, threshold = DEFAULT_THRESHOLD))]
fn compare_spectra(
    py: Python<'_>,
    profile_name: &str,
    epsilon: f64,
    sigma: i32,
    grid: Option<&PyGrid>,
    threshold: f64,
) -> PyResult<Vec<PySpectrumRecord>> {
    let (p, s) = (profile(profile_name)?, sector(sigma)?);
    let grid = grid_or_default(grid, epsilon)?;
    let c = py
        .detach(|| diag::compare_spectra(p, epsilon, s, &grid, threshold))
        .map_err(to_py)?;
    Ok(c.records.into_iter().map(Into::into).collect())
}

/// `(x, psi_fd, psi_wkb, error)`; `psi_wkb` is `None` inside the turning-point zones.
#[pyfunction]
#[pyo3(signature = (profile_name, epsilon, sigma, n, grid = None))]
fn eigenfunction_comparison(
    py: Python<'_>,
    profile_name: &str,
    epsilon: f64,
    sigma: i32,
    n: usize,
    grid: Option<&PyGrid>,
) -> PyResult<(Vec<f64>, Vec<f64>, Vec<Option<f64>>, f64)> {
    let (p, s) = (profile(profile_name)?, sector(sigma)?);
    let grid = grid_or_default(grid, epsilon)?;
    let c = py
        .detach(|| diag::eigenfunction_comparison(p, epsilon, s, n, &grid))
        .map_err(to_py)?;
    Ok((c.x, c.psi_fd, c.psi_wkb, c.error))
}

#[pyfunction]
#[pyo3(signature = (profile_name, epsilon, grid = None))]
fn zero_mode(profile_name: &str, epsilon: f64, grid: Option<&PyGrid>) -> PyResult<Vec<f64>> {
    let grid = grid_or_default(grid, epsilon)?;
    wkb::zero_mode(profile(profile_name)?, epsilon, &grid).map_err(to_py)
}

#[pymodule]
fn dirac_wkb_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PySpectrumRecord>()?;
    m.add_class::<PyQuantization>()?;
    m.add("DEFAULT_THRESHOLD", DEFAULT_THRESHOLD)?;
    m.add("DEFAULT_DOMAIN", DEFAULT_DOMAIN)?;
    m.add_function(wrap_pyfunction!(mass, m)?)?;
    m.add_function(wrap_pyfunction!(antiderivative, m)?)?;
    m.add_function(wrap_pyfunction!(airy, m)?)?;
    m.add_function(wrap_pyfunction!(pt_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(turning_points, m)?)?;
    m.add_function(wrap_pyfunction!(phase_integral, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_count, m)?)?;
    m.add_function(wrap_pyfunction!(solve_bs, m)?)?;
    m.add_function(wrap_pyfunction!(bs_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(fd_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(compare_spectra, m)?)?;
    m.add_function(wrap_pyfunction!(eigenfunction_comparison, m)?)?;
    m.add_function(wrap_pyfunction!(zero_mode, m)?)?;
    Ok(())
}
