//! Oracle suites behind the `validate` subcommand.

use std::fmt;

use crate::caputo::KernelWeights;
use crate::error::Result;
use crate::legendre::gauss_rule;
use crate::linalg::{dense, factor};
use crate::oracle::{caputo_by_quadrature, caputo_t2, Benchmark};
use crate::profiles::MuProfile;
use crate::special::gamma;
use crate::stepper::{InitialField, ProblemSpec, Solver};

use super::config::{ProblemKind, RunConfig};
use super::experiment::Experiment;
use super::ladder::run_single;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Telescoping identities of the discrete Caputo weights on a grid of
/// steps, step sizes and orders.
pub fn weight_identities() -> Result<Check> {
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for k in [1, 2, 3, 7, 40, 200] {
        for tau in [0.1, 0.01, 0.000625] {
            for mu in [0.0, 0.1, 0.37, 0.5, 0.75, 0.99] {
                let w = KernelWeights::with_order(k, tau, mu)?;
                let (a, b) = (w.a(), w.b());
                let scale = b[k].abs();
                worst = worst.max(b.iter().sum::<f64>().abs() / scale);
                worst = worst.max((b[0] + a[0]).abs() / scale);
                let lead = tau.powf(-mu) / gamma(1.0 - mu)?;
                worst = worst.max((b[k] - lead).abs() / lead);
                violations += b[..k].iter().filter(|&&x| x > 0.0).count();
                violations += a.windows(2).filter(|p| p[1] < p[0]).count();
            }
        }
    }
    Ok(Check::new(
        "weight identities",
        worst < 1e-12 && violations == 0,
        format!("max relative defect {worst:.2e}, sign/monotonicity violations {violations}"),
    ))
}

/// Banded parity-split solves against dense LU on every step of a short run.
pub fn banded_vs_dense() -> Result<Check> {
    let spec = Benchmark::SineOscillating.manufactured().problem_spec();
    let solver = Solver::new(&spec, 24, 40)?;
    let mass = solver.space().mass();
    let stiffness = solver.space().stiffness();
    let mut state = solver.init()?;
    let mut worst: f64 = 0.0;
    for _ in 0..solver.n_steps() {
        let sys = solver.assemble(&state)?;
        let banded = factor(sys.d, sys.beta, mass, stiffness)?.solve(&sys.rhs)?;
        let mut a = mass.to_dense();
        for (i, row) in a.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v *= sys.d;
                if i == j {
                    *v += sys.beta * stiffness[i];
                }
            }
        }
        let full = dense::lu_solve(a, sys.rhs.clone())?;
        let scale = full.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
        worst = worst.max(banded.iter().zip(&full).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale);
        solver.step(&mut state)?;
    }
    Ok(Check::new("banded vs dense", worst < 1e-10, format!("max relative difference {worst:.2e} over 40 steps")))
}

pub fn gauss_exactness() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for q in 1..=32usize {
        let rule = gauss_rule(q, 0.0, 1.0)?;
        for deg in 0..2 * q {
            let exact = 1.0 / (deg as f64 + 1.0);
            worst = worst.max((rule.integrate(|x| x.powi(deg as i32)) - exact).abs());
        }
    }
    Ok(Check::new("gauss exactness", worst < 1e-12, format!("max defect {worst:.2e} for q <= 32")))
}

/// Closed-form Caputo derivative of `t^2` against adaptive quadrature.
pub fn caputo_closed_form() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for mu in [0.0, 0.25, 0.5, 0.75, 0.99] {
        for t in [0.1, 0.5, 1.0] {
            let q = caputo_by_quadrature(|r| 2.0 * r, mu, t, 1e-13);
            worst = worst.max((q - caputo_t2(mu, t)).abs());
        }
    }
    Ok(Check::new("caputo closed form", worst < 1e-9, format!("max difference {worst:.2e}")))
}

/// Scheme for one sine mode against the modal series at the final time.
pub fn series_comparison() -> Result<Check> {
    let mut errors = Vec::new();
    for n in [64usize, 128, 256] {
        let cfg = RunConfig { problem: ProblemKind::Mode, n_modes: 12, n_steps: n, horizon: 0.5, ..RunConfig::default() };
        let exp = Experiment::from_config(&cfg)?;
        errors.push(run_single(&exp, cfg.n_modes, n)?.error.unwrap_or(f64::NAN));
    }
    let rates: Vec<f64> = errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect();
    let decreasing = errors.windows(2).all(|e| e[1] < e[0]);
    Ok(Check::new(
        "series comparison",
        decreasing && errors[2] < 1e-2,
        format!("errors {:.3e} {:.3e} {:.3e}, observed orders {:.2} {:.2}", errors[0], errors[1], errors[2], rates[0], rates[1]),
    ))
}

/// With `mu = 0` the damping reduces to `rho (Phi_i - Phi_0)`; a run must
/// match a hand-written scheme carrying that term directly.
pub fn zero_order_degeneration() -> Result<Check> {
    let mut spec = ProblemSpec::homogeneous(0.0, 1.0, 1.0, MuProfile::constant(0.0, 1.0)?);
    spec.phi0 = InitialField::sine(0.0, 1.0, 1);
    spec.psi0 = InitialField::bubble(0.0, 1.0);
    let solver = Solver::new(&spec, 12, 50)?;
    let (state, _) = solver.run()?;
    // explicit variant: (1/tau^2 + 1) M U_i + S U_i = M (2 U_{i-1} - U_{i-2}) / tau^2 + M U_0
    let space = solver.space();
    let tau = solver.tau();
    let inv = 1.0 / (tau * tau);
    let fac = factor(inv + 1.0, 1.0, space.mass(), space.stiffness())?;
    let mut u = vec![state.u(0).to_vec()];
    let v0 = state.v(0).to_vec();
    let mut worst: f64 = 0.0;
    for i in 1..=solver.n_steps() {
        let prev = &u[i - 1];
        let combo: Vec<f64> = if i == 1 {
            prev.iter().zip(&v0).map(|(p, v)| p * inv + v / tau).collect()
        } else {
            prev.iter().zip(&u[i - 2]).map(|(p, q)| (2.0 * p - q) * inv).collect()
        };
        let combo: Vec<f64> = combo.iter().zip(&u[0]).map(|(c, z)| c + z).collect();
        let next = fac.solve(&space.mass().matvec(&combo))?;
        worst = worst.max(next.iter().zip(state.u(i)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        u.push(next);
    }
    Ok(Check::new("zero-order degeneration", worst < 1e-12, format!("max coefficient difference {worst:.2e}")))
}

pub fn all_checks() -> Result<Vec<Check>> {
    Ok(vec![
        weight_identities()?,
        zero_order_degeneration()?,
        banded_vs_dense()?,
        gauss_exactness()?,
        caputo_closed_form()?,
        series_comparison()?,
    ])
}
