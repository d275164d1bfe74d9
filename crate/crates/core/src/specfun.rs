//! Special functions used by the mass profiles and the turning-point analysis:
//! the error function and the Airy function `Ai` with its derivative.

use std::f64::consts::{FRAC_2_SQRT_PI, FRAC_PI_4, PI};

use crate::{Error, Result};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// `Ai(0) = 3^{-2/3} / Γ(2/3)`.
pub const AI_ZERO: f64 = 0.355_028_053_887_817_2;
/// `-Ai′(0) = 3^{-1/3} / Γ(1/3)`.
pub const NEG_AI_PRIME_ZERO: f64 = 0.258_819_403_792_806_8;

/// Largest `|ζ|` accepted by [`airy`].
pub const AIRY_MAX_ARG: f64 = 50.0;

// Switchover points. The Maclaurin series loses roughly `exp((4/3)|ζ|^{3/2})`
// digits relative to Ai on the positive axis, so beyond `SERIES_MAX_POS` the
// value is obtained by integrating the Airy equation backwards from the
// asymptotic region, the direction in which Ai is the dominant solution.
const SERIES_MAX_POS: f64 = 2.0;
const ASYMPTOTIC_MIN_POS: f64 = 8.0;
const ASYMPTOTIC_MIN_NEG: f64 = 7.0;
const TAYLOR_STEP: f64 = 0.5;

/// Error function, absolute error below `1e-15` on the real line.
///
/// Odd by construction: the magnitude is computed for `|x|` and the sign applied
/// afterwards.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let magnitude = if ax <= 3.0 {
        erf_series(ax)
    } else {
        1.0 - erfc_continued_fraction(ax)
    };
    magnitude.copysign(x)
}

/// `erf(x) = (2/√π) e^{-x²} Σ 2ⁿ x^{2n+1} / (2n+1)!!`, all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > 1e-17 * sum {
        term *= 2.0 * x2 / (2.0 * n + 3.0);
        sum += term;
        n += 1.0;
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

/// Laplace continued fraction for `erfc`, evaluated bottom-up; `x ≥ 3`.
fn erfc_continued_fraction(x: f64) -> f64 {
    let mut tail = x;
    for k in (1..=60).rev() {
        tail = x + 0.5 * f64::from(k) / tail;
    }
    (-x * x).exp() * FRAC_1_SQRT_PI / tail
}

/// `Ai` and `Ai′` at a real argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValue {
    pub ai: f64,
    pub ai_prime: f64,
    pub zeta: f64,
}

/// Airy function of the first kind and its derivative.
///
/// Relative accuracy is about `1e-11` away from the zeros of `Ai` on the
/// negative axis; near a zero the absolute error is of the same order relative
/// to the oscillation envelope `1/(√π |ζ|^{1/4})`.
pub fn airy(zeta: f64) -> Result<AiryValue> {
    if !zeta.is_finite() || zeta.abs() > AIRY_MAX_ARG {
        return Err(Error::Domain(format!(
            "Airy argument must satisfy |ζ| <= {AIRY_MAX_ARG}, got {zeta}"
        )));
    }
    let (ai, ai_prime) = if zeta < -ASYMPTOTIC_MIN_NEG {
        asymptotic_negative(-zeta)
    } else if zeta <= SERIES_MAX_POS {
        maclaurin(zeta)
    } else if zeta >= ASYMPTOTIC_MIN_POS {
        asymptotic_positive(zeta)
    } else {
        march_from_asymptotic(zeta)
    };
    Ok(AiryValue { ai, ai_prime, zeta })
}

/// `Ai = c₁ f − c₂ g` with the two standard power series `f`, `g`.
fn maclaurin(z: f64) -> (f64, f64) {
    let z3 = z * z * z;

    // f = Σ aₖ z^{3k},  a_{k+1}/aₖ = 1/((3k+2)(3k+3))
    let mut f = 1.0;
    let mut f_term = 1.0;
    // f′ starts at z²/2; consecutive ratio z³/(3k(3k+2))
    let mut df = 0.0;
    let mut df_term = 0.5 * z * z;
    // g = Σ bₖ z^{3k+1},  b_{k+1}/bₖ = 1/((3k+3)(3k+4))
    let mut g = z;
    let mut g_term = z;
    // g′ starts at 1; consecutive ratio z³/((3k+1)(3k+3))
    let mut dg = 1.0;
    let mut dg_term = 1.0;

    for k in 0..200 {
        let kf = f64::from(k);
        f_term *= z3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        g_term *= z3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        df += df_term;
        let kk = kf + 1.0;
        df_term *= z3 / (3.0 * kk * (3.0 * kk + 2.0));
        dg_term *= z3 / ((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        f += f_term;
        g += g_term;
        dg += dg_term;
        let scale = f.abs() + g.abs() + df.abs() + dg.abs();
        if f_term.abs() + g_term.abs() + df_term.abs() + dg_term.abs() < 1e-18 * scale {
            break;
        }
    }
    (
        AI_ZERO * f - NEG_AI_PRIME_ZERO * g,
        AI_ZERO * df - NEG_AI_PRIME_ZERO * dg,
    )
}

/// Coefficients `uₖ` of the Airy asymptotic expansions, with `vₖ`.
fn expansion_coefficients(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = Vec::with_capacity(count);
    let mut v = Vec::with_capacity(count);
    u.push(1.0);
    v.push(1.0);
    for k in 1..count {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next);
    }
    (u, v)
}

/// Sum `Σ (-1)ᵏ cₖ x^{-k}` over the given subsequence, stopping at the
/// smallest term.
fn asymptotic_sum(coeffs: impl Iterator<Item = f64>, inv_xi: f64, start_power: i32) -> f64 {
    let mut sum: f64 = 0.0;
    let mut last = f64::INFINITY;
    let mut power = inv_xi.powi(start_power);
    let step = inv_xi * inv_xi;
    let mut sign = 1.0;
    for c in coeffs {
        let term = c * power;
        if term.abs() > last {
            break;
        }
        sum += sign * term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        last = term.abs();
        power *= step;
        sign = -sign;
    }
    sum
}

fn asymptotic_positive(z: f64) -> (f64, f64) {
    let (u, v) = expansion_coefficients(40);
    let xi = 2.0 / 3.0 * z * z.sqrt();
    let inv = 1.0 / xi;
    let series = |c: &[f64]| {
        let mut sum = 0.0;
        let mut last = f64::INFINITY;
        let mut power = 1.0;
        let mut sign = 1.0;
        for &ck in c {
            let term = ck.abs() * power;
            if term > last {
                break;
            }
            sum += sign * ck * power;
            if term < 1e-18 {
                break;
            }
            last = term;
            power *= inv;
            sign = -sign;
        }
        sum
    };
    let quarter = z.sqrt().sqrt();
    let decay = (-xi).exp() * 0.5 * FRAC_1_SQRT_PI;
    (
        decay / quarter * series(&u),
        -quarter * decay * series(&v),
    )
}

fn asymptotic_negative(z: f64) -> (f64, f64) {
    let (u, v) = expansion_coefficients(60);
    let xi = 2.0 / 3.0 * z * z.sqrt();
    let inv = 1.0 / xi;
    let u_even = asymptotic_sum(u.iter().step_by(2).copied(), inv, 0);
    let u_odd = asymptotic_sum(u.iter().skip(1).step_by(2).copied(), inv, 1);
    let v_even = asymptotic_sum(v.iter().step_by(2).copied(), inv, 0);
    let v_odd = asymptotic_sum(v.iter().skip(1).step_by(2).copied(), inv, 1);
    let (s, c) = (xi - FRAC_PI_4).sin_cos();
    let quarter = z.sqrt().sqrt();
    (
        FRAC_1_SQRT_PI / quarter * (c * u_even + s * u_odd),
        FRAC_1_SQRT_PI * quarter * (s * v_even - c * v_odd),
    )
}

/// One Taylor step of `y″ = z y` from `z0` by `dz`.
fn taylor_step(z0: f64, y: f64, dy: f64, dz: f64) -> (f64, f64) {
    // c_{k+2} = (z0 cₖ + c_{k−1}) / ((k+1)(k+2))
    let mut c_prev = 0.0;
    let mut c0 = y;
    let mut c1 = dy;
    let mut value = y + dy * dz;
    let mut deriv = dy;
    let mut power = dz; // dz^{k+1} for the next derivative term
    let mut quiet = 0;
    for k in 0..80 {
        let kf = f64::from(k);
        let c2 = (z0 * c0 + c_prev) / ((kf + 1.0) * (kf + 2.0));
        let value_term = c2 * power * dz;
        let deriv_term = (kf + 2.0) * c2 * power;
        value += value_term;
        deriv += deriv_term;
        c_prev = c0;
        c0 = c1;
        c1 = c2;
        power *= dz;
        if value_term.abs() <= 1e-18 * value.abs() && deriv_term.abs() <= 1e-18 * deriv.abs() {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (value, deriv)
}

fn march_from_asymptotic(z: f64) -> (f64, f64) {
    let (mut y, mut dy) = asymptotic_positive(ASYMPTOTIC_MIN_POS);
    let mut at = ASYMPTOTIC_MIN_POS;
    while at > z {
        let step = (at - z).min(TAYLOR_STEP);
        (y, dy) = taylor_step(at, y, dy, -step);
        at -= step;
    }
    (y, dy)
}

/// Leading-order `Ai` for large positive argument: `e^{-ξ} / (2√π ζ^{1/4})`.
pub fn airy_leading_positive(zeta: f64) -> f64 {
    let xi = 2.0 / 3.0 * zeta.powf(1.5);
    (-xi).exp() / (2.0 * PI.sqrt() * zeta.powf(0.25))
}

/// Leading-order `Ai` for large negative argument:
/// `sin((2/3)|ζ|^{3/2} + π/4) / (√π |ζ|^{1/4})`.
pub fn airy_leading_negative(zeta: f64) -> f64 {
    let z = zeta.abs();
    (2.0 / 3.0 * z.powf(1.5) + FRAC_PI_4).sin() / (PI.sqrt() * z.powf(0.25))
}
