//! Variable fractional orders `mu(t)` and time-dependent coefficients.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Relative slack allowed past the horizon when sampling at `t = T`.
const HORIZON_SLACK: f64 = 1e-12;

/// Grid used to check `0 <= mu < 1` at construction.
const VALIDATION_SAMPLES: usize = 10_000;

/// A variable order `mu(t)` on `[0, horizon]`.
///
/// The smooth profiles interpolate between `start = mu(0)` and `end = mu(T)`
/// with `s = t / T`:
///
/// * `Linear`: `end + (start - end)(1 - s)`
/// * `Quadratic`: `end + (start - end)(1 - s^2)`
/// * `Oscillating`: `end + (start - end)(1 - s - sin(2 pi (1 - s)) / (2 pi))`
/// * `Sinusoidal`: `end + (start - end)(1 - sin(2 pi (1 - s)) / (2 pi))`,
///   which returns to `start` at `t = T` and never reaches `end`.
#[derive(Debug, Clone, PartialEq)]
pub enum MuProfile {
    Constant { mu: f64, horizon: f64 },
    Linear { start: f64, end: f64, horizon: f64 },
    Quadratic { start: f64, end: f64, horizon: f64 },
    Oscillating { start: f64, end: f64, horizon: f64 },
    Sinusoidal { start: f64, end: f64, horizon: f64 },
    /// `left` on `[0, T/2]` (right-continuous at 0), `right` on `(T/2, T]`.
    PiecewiseStep { left: f64, right: f64, horizon: f64 },
    /// Linear interpolation through `(t, mu)` knots with increasing `t`,
    /// spanning `[0, horizon]`.
    Tabulated { knots: Vec<(f64, f64)> },
}

impl MuProfile {
    pub fn constant(mu: f64, horizon: f64) -> Result<Self> {
        Self::Constant { mu, horizon }.validated()
    }

    pub fn linear(start: f64, end: f64, horizon: f64) -> Result<Self> {
        Self::Linear { start, end, horizon }.validated()
    }

    pub fn quadratic(start: f64, end: f64, horizon: f64) -> Result<Self> {
        Self::Quadratic { start, end, horizon }.validated()
    }

    pub fn oscillating(start: f64, end: f64, horizon: f64) -> Result<Self> {
        Self::Oscillating { start, end, horizon }.validated()
    }

    pub fn sinusoidal(start: f64, end: f64, horizon: f64) -> Result<Self> {
        Self::Sinusoidal { start, end, horizon }.validated()
    }

    pub fn piecewise_step(left: f64, right: f64, horizon: f64) -> Result<Self> {
        Self::PiecewiseStep { left, right, horizon }.validated()
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Domain("tabulated profile needs at least two knots".into()));
        }
        if knots[0].0 != 0.0 {
            return Err(Error::Domain("tabulated profile must start at t = 0".into()));
        }
        if knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Domain("tabulated knots must have strictly increasing times".into()));
        }
        Self::Tabulated { knots }.validated()
    }

    /// Build a profile from its configuration name.
    pub fn from_kind(kind: &str, start: f64, end: f64, horizon: f64) -> Result<Self> {
        match kind {
            "constant" => Self::constant(start, horizon),
            "linear" => Self::linear(start, end, horizon),
            "quadratic" => Self::quadratic(start, end, horizon),
            "oscillating" => Self::oscillating(start, end, horizon),
            "sinusoidal" => Self::sinusoidal(start, end, horizon),
            "piecewise" | "piecewise-step" => Self::piecewise_step(start, end, horizon),
            other => Err(Error::Config(format!("unknown mu profile kind `{other}`"))),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Constant { .. } => "constant",
            Self::Linear { .. } => "linear",
            Self::Quadratic { .. } => "quadratic",
            Self::Oscillating { .. } => "oscillating",
            Self::Sinusoidal { .. } => "sinusoidal",
            Self::PiecewiseStep { .. } => "piecewise-step",
            Self::Tabulated { .. } => "tabulated",
        }
    }

    pub fn horizon(&self) -> f64 {
        match self {
            Self::Constant { horizon, .. }
            | Self::Linear { horizon, .. }
            | Self::Quadratic { horizon, .. }
            | Self::Oscillating { horizon, .. }
            | Self::Sinusoidal { horizon, .. }
            | Self::PiecewiseStep { horizon, .. } => *horizon,
            Self::Tabulated { knots } => knots[knots.len() - 1].0,
        }
    }

    fn validated(self) -> Result<Self> {
        let horizon = self.horizon();
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Domain(format!("profile horizon must be positive, got {horizon}")));
        }
        for i in 0..=VALIDATION_SAMPLES {
            let t = horizon * i as f64 / VALIDATION_SAMPLES as f64;
            let mu = self.value_at(t);
            if !(0.0..1.0).contains(&mu) {
                return Err(Error::Domain(format!(
                    "{} profile leaves [0, 1): mu({t}) = {mu}",
                    self.kind()
                )));
            }
        }
        Ok(self)
    }

    /// Evaluate `mu(t)`; `t` must lie in `[0, T]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let horizon = self.horizon();
        if !(t >= 0.0 && t <= horizon * (1.0 + HORIZON_SLACK)) {
            return Err(Error::Domain(format!("time {t} outside [0, {horizon}]")));
        }
        Ok(self.value_at(t.min(horizon)))
    }

    fn value_at(&self, t: f64) -> f64 {
        match self {
            Self::Constant { mu, .. } => *mu,
            Self::Linear { start, end, horizon } => end + (start - end) * (1.0 - t / horizon),
            Self::Quadratic { start, end, horizon } => {
                let s = t / horizon;
                end + (start - end) * (1.0 - s * s)
            }
            Self::Oscillating { start, end, horizon } => {
                let s = t / horizon;
                end + (start - end) * (1.0 - s - (2.0 * PI * (1.0 - s)).sin() / (2.0 * PI))
            }
            Self::Sinusoidal { start, end, horizon } => {
                let s = t / horizon;
                end + (start - end) * (1.0 - (2.0 * PI * (1.0 - s)).sin() / (2.0 * PI))
            }
            Self::PiecewiseStep { left, right, horizon } => {
                if t <= 0.5 * horizon {
                    *left
                } else {
                    *right
                }
            }
            Self::Tabulated { knots } => {
                let idx = knots.partition_point(|&(tk, _)| tk <= t);
                if idx == 0 {
                    return knots[0].1;
                }
                if idx == knots.len() {
                    return knots[knots.len() - 1].1;
                }
                let (t0, m0) = knots[idx - 1];
                let (t1, m1) = knots[idx];
                m0 + (m1 - m0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Supremum of `mu` over `[0, T]`.
    pub fn mu_bar(&self) -> f64 {
        match self {
            Self::Constant { mu, .. } => *mu,
            Self::Linear { start, end, .. }
            | Self::Quadratic { start, end, .. }
            | Self::Oscillating { start, end, .. } => start.max(*end),
            Self::Sinusoidal { start, end, .. } => {
                // sin(2 pi (1 - s)) sweeps all of [-1, 1] on [0, T]
                let amp = 1.0 / (2.0 * PI);
                let lo = end + (start - end) * (1.0 - amp);
                let hi = end + (start - end) * (1.0 + amp);
                lo.max(hi)
            }
            Self::PiecewiseStep { left, right, .. } => left.max(*right),
            Self::Tabulated { knots } => knots.iter().map(|k| k.1).fold(f64::MIN, f64::max),
        }
    }
}

/// A coefficient `rho(t)` or `beta(t)` depending on time only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientFn {
    Constant(f64),
    /// `value * exp(-t)`
    ExpDecay(f64),
    /// `value * exp(t)`
    ExpGrowth(f64),
}

impl CoefficientFn {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Self::Constant(c) => c,
            Self::ExpDecay(c) => c * (-t).exp(),
            Self::ExpGrowth(c) => c * t.exp(),
        }
    }

    pub fn from_kind(kind: &str, value: f64) -> Result<Self> {
        match kind {
            "constant" => Ok(Self::Constant(value)),
            "exp-decay" => Ok(Self::ExpDecay(value)),
            "exp-growth" => Ok(Self::ExpGrowth(value)),
            other => Err(Error::Config(format!("unknown coefficient kind `{other}`"))),
        }
    }

    /// Smallest value on `[0, horizon]`.
    pub fn min_on(&self, horizon: f64) -> f64 {
        match *self {
            Self::Constant(c) => c,
            Self::ExpDecay(c) => c.min(c * (-horizon).exp()),
            Self::ExpGrowth(c) => c.min(c * horizon.exp()),
        }
    }
}
