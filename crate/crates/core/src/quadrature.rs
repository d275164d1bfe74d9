//! Tanh-sinh quadrature and Brent root bracketing.

use std::f64::consts::FRAC_PI_2;

use crate::{Error, Result};

pub const MAX_LEVEL: u32 = 12;
const MIN_LEVEL: u32 = 3;
const T_MAX: f64 = 4.0;
const MAX_ROOT_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult {
    pub value: f64,
    pub est_error: f64,
    pub evaluations: usize,
}

/// Incremental tanh-sinh rule on `[a, b]`; each refinement halves the step and
/// only evaluates the new abscissae.
struct TanhSinh<F> {
    f: F,
    center: f64,
    half: f64,
    sum: f64,
    level: u32,
    evaluations: usize,
}

impl<F: FnMut(f64) -> f64> TanhSinh<F> {
    fn new(f: F, a: f64, b: f64) -> Self {
        let mut rule = Self {
            f,
            center: 0.5 * (a + b),
            half: 0.5 * (b - a),
            sum: 0.0,
            level: 0,
            evaluations: 0,
        };
        rule.sum = rule.node(0.0);
        let mut k = 1.0;
        while k <= T_MAX {
            rule.sum += rule.node(k) + rule.node(-k);
            k += 1.0;
        }
        rule
    }

    fn node(&mut self, t: f64) -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let cosh_u = u.cosh();
        let weight = FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        if weight == 0.0 {
            return 0.0;
        }
        // measure from the nearer endpoint so abscissae crowding an end keep
        // their relative precision
        let gap = 2.0 * self.half / ((2.0 * u.abs()).exp() + 1.0);
        let x = if u >= 0.0 {
            self.center + self.half - gap
        } else {
            self.center - self.half + gap
        };
        self.evaluations += 1;
        let y = (self.f)(x);
        if y.is_finite() {
            weight * y
        } else {
            0.0
        }
    }

    fn estimate(&self) -> f64 {
        self.half * self.sum * 0.5f64.powi(self.level as i32)
    }

    fn refine(&mut self) {
        self.level += 1;
        let h = 0.5f64.powi(self.level as i32);
        let mut t = h;
        while t <= T_MAX {
            self.sum += self.node(t) + self.node(-t);
            t += 2.0 * h;
        }
    }
}

/// Estimates of `∫_a^b f` at tanh-sinh levels `0..=max_level` (step `2^{-l}`).
pub fn tanh_sinh_levels(f: impl FnMut(f64) -> f64, a: f64, b: f64, max_level: u32) -> Vec<f64> {
    let mut rule = TanhSinh::new(f, a, b);
    let mut out = vec![rule.estimate()];
    for _ in 0..max_level {
        rule.refine();
        out.push(rule.estimate());
    }
    out
}

/// Integrates `f` over `[a, b]`, tolerating inverse square-root growth at both
/// ends. Non-finite samples (an integrand blowing up exactly at an endpoint)
/// are dropped.
pub fn integrate_sqrt_endpoints(
    f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<IntegrationResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "integration interval must satisfy a < b, got [{a}, {b}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut rule = TanhSinh::new(f, a, b);
    let mut previous = rule.estimate();
    let mut est_error = f64::INFINITY;
    while rule.level < MAX_LEVEL {
        rule.refine();
        let current = rule.estimate();
        est_error = (current - previous).abs();
        previous = current;
        if rule.level >= MIN_LEVEL && est_error < tol {
            return Ok(IntegrationResult {
                value: current,
                est_error,
                evaluations: rule.evaluations,
            });
        }
    }
    Err(Error::NoConvergence {
        method: "tanh-sinh",
        steps: rule.level as usize,
        est_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    pub iterations: usize,
    pub bracket_width: f64,
}

/// Root of `g` in `[lo, hi]`.
pub fn find_root_bracketed(g: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    brent(g, lo, hi, tol).map(|r| r.root)
}

/// Brent's method: inverse quadratic / secant steps guarded by bisection.
/// Terminates once the sign-change bracket is no wider than `tol`.
pub fn brent(mut g: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<RootResult> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa * fb > 0.0 || fa.is_nan() || fb.is_nan() {
        return Err(Error::BadBracket {
            lo,
            hi,
            g_lo: fa,
            g_hi: fb,
        });
    }
    if fa == 0.0 {
        return Ok(RootResult { root: a, iterations: 0, bracket_width: 0.0 });
    }
    if fb == 0.0 {
        return Ok(RootResult { root: b, iterations: 0, bracket_width: 0.0 });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iteration in 1..=MAX_ROOT_ITERATIONS {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let step_tol = 2.0 * f64::EPSILON * b.abs() + 0.25 * tol;
        let xm = 0.5 * (c - b);
        let width = (c - b).abs();
        if width <= tol || width <= 4.0 * f64::EPSILON * b.abs() || fb == 0.0 {
            return Ok(RootResult {
                root: b,
                iterations: iteration - 1,
                bracket_width: if fb == 0.0 { 0.0 } else { width },
            });
        }
        if e.abs() >= step_tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (step_tol * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > step_tol { d } else { step_tol.copysign(xm) };
        fb = g(b);
    }
    Err(Error::NoConvergence {
        method: "brent",
        steps: MAX_ROOT_ITERATIONS,
        est_error: (c - b).abs(),
    })
}
