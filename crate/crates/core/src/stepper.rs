//! Fully discrete Rothe / Legendre-Galerkin time loop.
//!
//! Each step solves the linearly implicit system
//!
//! ```text
//! (d_i M + beta_i S) U_i = L_i + M sum_{q<i} bhat_q U_q
//! d_i    = 1 / tau^2 + rho_i b_i
//! bhat_q = -rho_i b_q + delta_{q,i-1} / tau^2
//! L_i    = (Q(t_i) + f(Phi_{i-1}), chi_j) + M V_i / tau,   V_i = (U_{i-1} - U_{i-2}) / tau
//! ```
//!
//! with `b_q` the discrete Caputo weights of step `i` and `rho, beta, mu`
//! sampled at `t_i`. The nonlinearity is lagged by one step.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::caputo::KernelWeights;
use crate::error::{Error, Result};
use crate::galerkin::SpectralSpace;
use crate::legendre::Basis;
use crate::linalg::{apply_system, factor};
use crate::profiles::{CoefficientFn, MuProfile};

pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Tolerance for the boundary values of the initial displacement.
const BOUNDARY_TOL: f64 = 1e-10;

/// An initial field given by its values and its spatial derivative.
#[derive(Clone)]
pub struct InitialField {
    value: SpaceFn,
    deriv: SpaceFn,
}

impl InitialField {
    pub fn new(value: SpaceFn, deriv: SpaceFn) -> Self {
        Self { value, deriv }
    }

    pub fn zero() -> Self {
        Self::new(Arc::new(|_| 0.0), Arc::new(|_| 0.0))
    }

    /// `sin(mode * pi * (x - a) / (b - a))`
    pub fn sine(a: f64, b: f64, mode: u32) -> Self {
        let k = mode as f64 * std::f64::consts::PI / (b - a);
        Self::new(Arc::new(move |x| (k * (x - a)).sin()), Arc::new(move |x| k * (k * (x - a)).cos()))
    }

    /// `(x - a)(b - x)`
    pub fn bubble(a: f64, b: f64) -> Self {
        Self::new(Arc::new(move |x| (x - a) * (b - x)), Arc::new(move |x| a + b - 2.0 * x))
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        (self.deriv)(x)
    }
}

impl fmt::Debug for InitialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("InitialField")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nonlinearity {
    Zero,
    /// `Phi (1 - Phi)`
    LogisticMinus,
    /// `Phi (1 + Phi)`
    LogisticPlus,
}

impl Nonlinearity {
    pub fn eval(self, phi: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::LogisticMinus => phi * (1.0 - phi),
            Self::LogisticPlus => phi * (1.0 + phi),
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "zero" | "none" => Ok(Self::Zero),
            "logistic-" | "logistic-minus" => Ok(Self::LogisticMinus),
            "logistic+" | "logistic-plus" => Ok(Self::LogisticPlus),
            other => Err(Error::Config(format!("unknown nonlinearity `{other}`"))),
        }
    }
}

/// Data of `Phi_tt + rho(t) D^{mu(t)} Phi = (beta(t) Phi_x)_x + f(Phi) + Q`
/// on `(a, b) x (0, T]` with homogeneous Dirichlet conditions.
#[derive(Clone)]
pub struct ProblemSpec {
    pub a: f64,
    pub b: f64,
    pub horizon: f64,
    pub rho: CoefficientFn,
    pub beta: CoefficientFn,
    pub mu: MuProfile,
    pub nonlinearity: Nonlinearity,
    pub source: Option<SpaceTimeFn>,
    pub phi0: InitialField,
    pub psi0: InitialField,
    /// Clamp `Phi` to `[-c, c]` before applying the nonlinearity.
    pub clamp: Option<f64>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("domain", &(self.a, self.b))
            .field("horizon", &self.horizon)
            .field("rho", &self.rho)
            .field("beta", &self.beta)
            .field("mu", &self.mu)
            .field("nonlinearity", &self.nonlinearity)
            .field("source", &self.source.is_some())
            .field("clamp", &self.clamp)
            .finish()
    }
}

impl ProblemSpec {
    /// Unit-coefficient homogeneous problem on `[a, b] x [0, horizon]`.
    pub fn homogeneous(a: f64, b: f64, horizon: f64, mu: MuProfile) -> Self {
        Self {
            a,
            b,
            horizon,
            rho: CoefficientFn::Constant(1.0),
            beta: CoefficientFn::Constant(1.0),
            mu,
            nonlinearity: Nonlinearity::Zero,
            source: None,
            phi0: InitialField::zero(),
            psi0: InitialField::zero(),
            clamp: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b > self.a) {
            return Err(Error::Config(format!("invalid domain [{}, {}]", self.a, self.b)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Config(format!("horizon must be positive, got {}", self.horizon)));
        }
        if (self.mu.horizon() - self.horizon).abs() > 1e-12 * self.horizon {
            return Err(Error::Config(format!(
                "order profile horizon {} differs from problem horizon {}",
                self.mu.horizon(),
                self.horizon
            )));
        }
        let beta_min = self.beta.min_on(self.horizon);
        if !(beta_min > 0.0) {
            return Err(Error::Config(format!("diffusion coefficient must stay positive, min {beta_min}")));
        }
        let rho_min = self.rho.min_on(self.horizon);
        if !(rho_min >= 0.0) {
            return Err(Error::Config(format!("damping coefficient must be non-negative, min {rho_min}")));
        }
        for x in [self.a, self.b] {
            let v = self.phi0.value(x);
            if !(v.abs() <= BOUNDARY_TOL) {
                return Err(Error::Config(format!("initial displacement is {v} at boundary point {x}")));
            }
        }
        if let Some(c) = self.clamp {
            if !(c > 0.0) {
                return Err(Error::Config(format!("clamp must be positive, got {c}")));
            }
        }
        Ok(())
    }
}

/// Coefficient trajectory `U_0 ..= U_i` and backward differences `V_0 ..= V_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    tau: f64,
}

impl SpectralState {
    /// Index of the last computed step.
    pub fn step_index(&self) -> usize {
        self.u.len() - 1
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn u(&self, i: usize) -> &[f64] {
        &self.u[i]
    }

    /// `V_i`: the initial velocity projection for `i = 0`, else `(U_i - U_{i-1}) / tau`.
    pub fn v(&self, i: usize) -> &[f64] {
        &self.v[i]
    }

    pub fn trajectory(&self) -> &[Vec<f64>] {
        &self.u
    }

    pub fn velocities(&self) -> &[Vec<f64>] {
        &self.v
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.tau
    }
}

/// Linear system of one step, before factorisation.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSystem {
    pub index: usize,
    pub time: f64,
    pub d: f64,
    pub beta: f64,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub n_modes: usize,
    pub n_steps: usize,
    /// Relative residual `|A U_i - r|_inf / max(|r|_inf, 1)` per step.
    pub residuals: Vec<f64>,
    pub elapsed: Duration,
}

impl SolveReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// A problem bound to a spatial discretisation and a uniform time grid.
#[derive(Debug, Clone)]
pub struct Solver {
    spec: ProblemSpec,
    space: SpectralSpace,
    n_steps: usize,
    tau: f64,
}

impl Solver {
    pub fn new(spec: &ProblemSpec, n_modes: usize, n_steps: usize) -> Result<Self> {
        Self::with_quadrature(spec, n_modes, n_steps, None)
    }

    pub fn with_quadrature(spec: &ProblemSpec, n_modes: usize, n_steps: usize, quad_order: Option<usize>) -> Result<Self> {
        spec.validate()?;
        if n_modes < 4 {
            return Err(Error::Config(format!("spectral truncation must be at least 4, got {n_modes}")));
        }
        if n_steps < 2 {
            return Err(Error::Config(format!("need at least 2 time steps, got {n_steps}")));
        }
        let tau = spec.horizon / n_steps as f64;
        if !(tau < 1.0) {
            return Err(Error::Config(format!("time step {tau} must be below 1")));
        }
        let basis = Basis::new(n_modes, spec.a, spec.b)?;
        let space = match quad_order {
            Some(order) => SpectralSpace::with_quadrature(basis, order)?,
            None => SpectralSpace::new(basis)?,
        };
        Ok(Self { spec: spec.clone(), space, n_steps, tau })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn space(&self) -> &SpectralSpace {
        &self.space
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// `t_i`, exact at the horizon.
    pub fn time(&self, i: usize) -> f64 {
        if i == self.n_steps {
            self.spec.horizon
        } else {
            i as f64 * self.tau
        }
    }

    /// `U_0` is the `H^1_0` projection of the initial displacement and `V_0`
    /// the `L^2` projection of the initial velocity.
    pub fn init(&self) -> Result<SpectralState> {
        let u0 = self.space.project_h1(|x| self.spec.phi0.deriv(x));
        let v0 = self.space.project_l2(|x| self.spec.psi0.value(x))?;
        Ok(SpectralState { u: vec![u0], v: vec![v0], tau: self.tau })
    }

    /// Assemble the system advancing `state` from step `i - 1` to `i`.
    pub fn assemble(&self, state: &SpectralState) -> Result<StepSystem> {
        let i = state.step_index() + 1;
        if i > self.n_steps {
            return Err(Error::Domain(format!("state already at the final step {}", self.n_steps)));
        }
        let t = self.time(i);
        let rho = self.spec.rho.eval(t);
        let beta = self.spec.beta.eval(t);
        let mu = self.spec.mu.eval(t)?;
        let weights = KernelWeights::with_order(i, self.tau, mu)?;
        let b = weights.b();
        let inv_tau2 = 1.0 / (self.tau * self.tau);
        let d = inv_tau2 + rho * weights.leading();

        let dim = self.space.dim();
        let prev = &state.u[i - 1];
        // sum_{q<i} bhat_q U_q + V_i / tau, then one product with M
        let mut combo: Vec<f64> = prev
            .iter()
            .zip(&state.v[i - 1])
            .map(|(u, v)| u * inv_tau2 + v / self.tau)
            .collect();
        if rho != 0.0 {
            let mut history = vec![0.0; dim];
            for (bq, uq) in b[..i].iter().zip(&state.u) {
                for (h, x) in history.iter_mut().zip(uq) {
                    *h += bq * x;
                }
            }
            for (c, h) in combo.iter_mut().zip(&history) {
                *c -= rho * h;
            }
        }
        let mut rhs = self.space.mass().matvec(&combo);

        let mut samples = vec![0.0; self.space.nodes().len()];
        if self.spec.nonlinearity != Nonlinearity::Zero {
            let phi = self.space.values_at_nodes(prev);
            for (s, p) in samples.iter_mut().zip(phi) {
                let p = match self.spec.clamp {
                    Some(c) => p.clamp(-c, c),
                    None => p,
                };
                *s += self.spec.nonlinearity.eval(p);
            }
        }
        if let Some(source) = &self.spec.source {
            for (s, &x) in samples.iter_mut().zip(self.space.nodes()) {
                *s += source(x, t);
            }
        }
        if samples.iter().any(|&s| s != 0.0) {
            for (r, m) in rhs.iter_mut().zip(self.space.moments(&samples)) {
                *r += m;
            }
        }
        Ok(StepSystem { index: i, time: t, d, beta, rhs })
    }

    /// Advance one step; returns the relative residual of the linear solve.
    pub fn step(&self, state: &mut SpectralState) -> Result<f64> {
        let system = self.assemble(state)?;
        let mass = self.space.mass();
        let stiffness = self.space.stiffness();
        let factors = factor(system.d, system.beta, mass, stiffness)?;
        let u = factors.solve(&system.rhs)?;

        let applied = apply_system(system.d, system.beta, mass, stiffness, &u);
        let scale = system.rhs.iter().fold(1.0f64, |m, r| m.max(r.abs()));
        let residual = applied.iter().zip(&system.rhs).map(|(a, r)| (a - r).abs()).fold(0.0, f64::max) / scale;

        let prev = &state.u[system.index - 1];
        let v: Vec<f64> = u.iter().zip(prev).map(|(a, b)| (a - b) / self.tau).collect();
        state.u.push(u);
        state.v.push(v);
        Ok(residual)
    }

    pub fn run(&self) -> Result<(SpectralState, SolveReport)> {
        let start = Instant::now();
        let mut state = self.init()?;
        let mut residuals = Vec::with_capacity(self.n_steps);
        for _ in 0..self.n_steps {
            residuals.push(self.step(&mut state)?);
        }
        let report = SolveReport {
            n_modes: self.space.basis().truncation(),
            n_steps: self.n_steps,
            residuals,
            elapsed: start.elapsed(),
        };
        Ok((state, report))
    }
}

/// Solve `spec` with truncation `n_modes` and `n_steps` uniform steps.
pub fn run(spec: &ProblemSpec, n_modes: usize, n_steps: usize) -> Result<(SpectralState, SolveReport)> {
    Solver::new(spec, n_modes, n_steps)?.run()
}
