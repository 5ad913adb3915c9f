//! Gamma function and the two-argument multinomial Mittag-Leffler series.
//!
//! The series
//!
//! ```text
//! E_{(a1,a2),b}(z1, z2) = sum_k sum_{k1+k2=k} C(k, k2) z1^k1 z2^k2 / Gamma(b + a1 k1 + a2 k2)
//! ```
//!
//! generates the two fundamental time modes of the constant-order damped
//! wave equation `T'' + D^mu T + kappa T = 0`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument for which `Gamma` is finite in f64.
const GAMMA_OVERFLOW: f64 = 171.6;

/// Diagonal cap for [`ml2`].
pub const ML2_MAX_DIAGONALS: usize = 400;

/// Admissible magnitude of either argument of [`ml2`].
pub const ML2_ENVELOPE: f64 = 150.0;

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (Gamma(x + 1) form)
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// Gamma on the whole real line except the poles; NaN at non-positive integers.
fn gamma_real(x: f64) -> f64 {
    if x < 0.5 {
        if x == x.floor() {
            return f64::NAN;
        }
        return PI / ((PI * x).sin() * gamma_real(1.0 - x));
    }
    if x > GAMMA_OVERFLOW {
        return f64::INFINITY;
    }
    if x == x.floor() {
        // exact factorials through 22!, correctly rounded products beyond
        return (2..x as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power to keep t^(z+1/2) finite up to the overflow threshold
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(z)
}

/// Gamma function for positive arguments.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma requires a positive argument, got {x}")));
    }
    Ok(gamma_real(x))
}

/// Natural log of `|Gamma(x)|`; `+inf` at the poles.
pub fn ln_gamma_abs(x: f64) -> f64 {
    if x < 0.5 {
        if x == x.floor() {
            return f64::INFINITY;
        }
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma_abs(1.0 - x);
    }
    if x < 20.0 {
        return gamma_real(x).abs().ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// `1 / Gamma(x)`, which is entire: exactly zero at the non-positive integers.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x < GAMMA_OVERFLOW {
        1.0 / gamma_real(x)
    } else {
        (-ln_gamma_abs(x)).exp()
    }
}

/// Binomial coefficient in floating point via log-Gamma, rounded to the
/// nearest integer while that is exactly representable.
fn binomial(n: usize, k: usize) -> f64 {
    if k == 0 || k == n {
        return 1.0;
    }
    let ln = ln_gamma_abs(n as f64 + 1.0) - ln_gamma_abs(k as f64 + 1.0) - ln_gamma_abs((n - k) as f64 + 1.0);
    let value = ln.exp();
    if value < 9.0e15 {
        value.round()
    } else {
        value
    }
}

/// Parameters `(alpha1, alpha2)` and Gamma offset `beta` of the two-argument series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
}

impl MlParams {
    pub fn new(alpha1: f64, alpha2: f64, beta: f64) -> Result<Self> {
        if !(alpha1 > 0.0 && alpha2 > 0.0) {
            return Err(Error::Domain(format!(
                "series exponents must be positive, got ({alpha1}, {alpha2})"
            )));
        }
        Ok(Self { alpha1, alpha2, beta })
    }

    /// The family `(2, 2 - mu)` that carries the damped wave modes.
    pub fn wave(mu: f64, beta: f64) -> Result<Self> {
        Self::new(2.0, 2.0 - mu, beta)
    }
}

fn series_term(params: &MlParams, k1: usize, k2: usize, z1: f64, z2: f64) -> f64 {
    let arg = params.beta + params.alpha1 * k1 as f64 + params.alpha2 * k2 as f64;
    if arg <= 0.0 && arg == arg.floor() {
        return 0.0;
    }
    if (k1 > 0 && z1 == 0.0) || (k2 > 0 && z2 == 0.0) {
        return 0.0;
    }
    let k = k1 + k2;
    if arg < GAMMA_OVERFLOW && k <= 150 {
        let direct = binomial(k, k2) * z1.powi(k1 as i32) * z2.powi(k2 as i32) * reciprocal_gamma(arg);
        if direct.is_finite() {
            return direct;
        }
    }
    let mut ln = ln_gamma_abs(k as f64 + 1.0) - ln_gamma_abs(k1 as f64 + 1.0) - ln_gamma_abs(k2 as f64 + 1.0);
    let mut sign = 1.0;
    if k1 > 0 {
        ln += k1 as f64 * z1.abs().ln();
        if z1 < 0.0 && k1 % 2 == 1 {
            sign = -sign;
        }
    }
    if k2 > 0 {
        ln += k2 as f64 * z2.abs().ln();
        if z2 < 0.0 && k2 % 2 == 1 {
            sign = -sign;
        }
    }
    ln -= ln_gamma_abs(arg);
    if arg < 0.0 && gamma_real(arg) < 0.0 {
        sign = -sign;
    }
    sign * ln.exp()
}

/// Two-argument multinomial Mittag-Leffler series summed along diagonals of
/// constant total degree. Stops once three consecutive diagonal sums are
/// below `tol` in magnitude.
pub fn ml2(params: MlParams, z1: f64, z2: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if !(z1.abs() <= ML2_ENVELOPE && z2.abs() <= ML2_ENVELOPE) {
        return Err(Error::Domain(format!(
            "arguments ({z1}, {z2}) outside the series envelope |z| <= {ML2_ENVELOPE}"
        )));
    }
    let mut sum = 0.0;
    let mut small_run = 0;
    for k in 0..ML2_MAX_DIAGONALS {
        let diagonal: f64 = (0..=k).map(|k2| series_term(&params, k - k2, k2, z1, z2)).sum();
        sum += diagonal;
        if diagonal.abs() < tol {
            small_run += 1;
            if small_run == 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence { terms: ML2_MAX_DIAGONALS, partial_sum: sum })
}

const MODE_TOL: f64 = 1e-16;

fn wave_series(mu: f64, beta: f64, kappa: f64, t: f64) -> Result<f64> {
    check_mode_args(kappa, mu, t)?;
    let params = MlParams::wave(mu, beta)?;
    ml2(params, -kappa * t * t, -t.powf(2.0 - mu), MODE_TOL)
}

fn check_mode_args(kappa: f64, mu: f64, t: f64) -> Result<()> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("eigenvalue must be positive, got {kappa}")));
    }
    if !(0.0..1.0).contains(&mu) {
        return Err(Error::Domain(format!("order must lie in [0, 1), got {mu}")));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    Ok(())
}

/// First fundamental mode, `T(0) = 1`, `T'(0) = 0`:
/// `1 - kappa t^2 E_{(2,2-mu),3}(-kappa t^2, -t^{2-mu})`.
pub fn mode_t1(kappa: f64, mu: f64, t: f64) -> Result<f64> {
    Ok(1.0 - kappa * t * t * wave_series(mu, 3.0, kappa, t)?)
}

/// Second fundamental mode, `T(0) = 0`, `T'(0) = 1`: `t E_{(2,2-mu),2}`.
pub fn mode_t2(kappa: f64, mu: f64, t: f64) -> Result<f64> {
    Ok(t * wave_series(mu, 2.0, kappa, t)?)
}

pub fn mode_t1_prime(kappa: f64, mu: f64, t: f64) -> Result<f64> {
    Ok(-kappa * t * wave_series(mu, 2.0, kappa, t)?)
}

pub fn mode_t2_prime(kappa: f64, mu: f64, t: f64) -> Result<f64> {
    wave_series(mu, 1.0, kappa, t)
}

pub fn mode_t1_second(kappa: f64, mu: f64, t: f64) -> Result<f64> {
    Ok(-kappa * wave_series(mu, 1.0, kappa, t)?)
}

/// `-kappa t E_{(2,2-mu),2} - t^{1-mu} E_{(2,2-mu),2-mu}`; singular at `t = 0` when `mu > 0`.
pub fn mode_t2_second(kappa: f64, mu: f64, t: f64) -> Result<f64> {
    let first = -kappa * t * wave_series(mu, 2.0, kappa, t)?;
    let second = t.powf(1.0 - mu) * wave_series(mu, 2.0 - mu, kappa, t)?;
    Ok(first - second)
}
