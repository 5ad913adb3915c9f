//! A configured problem together with the reference its errors are measured against.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galerkin::SpectralSpace;
use crate::oracle::{max_l2_error, ErrorNorm, ManufacturedSolution, ModalSeries};
use crate::profiles::{CoefficientFn, MuProfile};
use crate::stepper::{InitialField, Nonlinearity, ProblemSpec, SpectralState};

use super::config::{FieldKind, ProblemKind, RunConfig};

#[derive(Debug, Clone)]
pub enum Reference {
    Manufactured(ManufacturedSolution),
    /// Modal series on `[a, a + L]`.
    Series { series: ModalSeries, a: f64 },
    None,
}

impl Reference {
    /// `max_i |Phi^N_i - Phi(t_i)|_{L^2}` over all steps.
    pub fn max_error(&self, space: &SpectralSpace, state: &SpectralState) -> Result<f64> {
        match self {
            Self::Manufactured(ms) => max_l2_error(space, state, |x, t| ms.exact(x, t)),
            Self::Series { series, a } => {
                let norm = ErrorNorm::new(space)?;
                let mut worst: f64 = 0.0;
                for i in 1..=state.step_index() {
                    let amps = series.amplitudes(state.time(i))?;
                    worst = worst.max(norm.l2_error(state.u(i), |x| series.eval_with(&amps, x - a)));
                }
                Ok(worst)
            }
            Self::None => Err(Error::Config("this problem has no reference solution".into())),
        }
    }

    /// Reference value at a point, when one exists.
    pub fn value(&self, x: f64, t: f64) -> Result<Option<f64>> {
        match self {
            Self::Manufactured(ms) => Ok(Some(ms.exact(x, t))),
            Self::Series { series, a } => series.eval(x - a, t).map(Some),
            Self::None => Ok(None),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub tag: String,
    pub spec: ProblemSpec,
    pub reference: Reference,
    pub quad_order: Option<usize>,
}

impl Experiment {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let tag = cfg.label.clone().unwrap_or_else(|| cfg.problem.tag().to_string());
        let (spec, reference) = match cfg.problem {
            ProblemKind::Benchmark(bench) => {
                let mut ms = bench.manufactured();
                ms.mu = cfg.mu_profile(Some(&ms.mu))?;
                if (ms.mu.horizon() - cfg.horizon).abs() > 1e-12 {
                    return Err(Error::Config(format!(
                        "T = {} differs from the order profile horizon {}; set the mu keys",
                        cfg.horizon,
                        ms.mu.horizon()
                    )));
                }
                if let Some(rho) = cfg.rho {
                    ms.rho = rho;
                }
                if let Some(beta) = cfg.beta {
                    ms.beta = beta;
                }
                if let Some(f) = cfg.nonlinearity {
                    ms.nonlinearity = f;
                }
                if cfg.phi0.is_some() || cfg.psi0.is_some() {
                    return Err(Error::Config("benchmark problems fix their initial data".into()));
                }
                let mut spec = ms.problem_spec();
                spec.clamp = cfg.clamp;
                (spec, Reference::Manufactured(ms))
            }
            ProblemKind::Mode => {
                let mu = cfg.mu_profile(None)?;
                let MuProfile::Constant { mu: order, .. } = mu else {
                    return Err(Error::Config("the mode problem needs a constant order".into()));
                };
                let unit = Some(CoefficientFn::Constant(1.0));
                if (cfg.rho.is_some() && cfg.rho != unit)
                    || (cfg.beta.is_some() && cfg.beta != unit)
                    || cfg.nonlinearity.is_some_and(|f| f != Nonlinearity::Zero)
                {
                    return Err(Error::Config("the mode problem has unit coefficients and no nonlinearity".into()));
                }
                if [cfg.phi0, cfg.psi0].contains(&Some(FieldKind::Bubble)) {
                    return Err(Error::Config("the mode problem takes sine or zero initial data".into()));
                }
                let mut spec = ProblemSpec::homogeneous(cfg.a, cfg.b, cfg.horizon, mu);
                spec.phi0 = cfg.phi0.unwrap_or(FieldKind::Sine).build(cfg.a, cfg.b, cfg.mode_index);
                spec.psi0 = cfg.psi0.unwrap_or(FieldKind::Zero).build(cfg.a, cfg.b, cfg.mode_index);
                let (phi0, psi0) = (shifted(&spec.phi0, cfg.a), shifted(&spec.psi0, cfg.a));
                let series = ModalSeries::new(cfg.mode_index as usize, order, cfg.b - cfg.a, &phi0, &psi0)?;
                (spec, Reference::Series { series, a: cfg.a })
            }
            ProblemKind::Custom => {
                let mut spec = ProblemSpec::homogeneous(cfg.a, cfg.b, cfg.horizon, cfg.mu_profile(None)?);
                if let Some(rho) = cfg.rho {
                    spec.rho = rho;
                }
                if let Some(beta) = cfg.beta {
                    spec.beta = beta;
                }
                spec.nonlinearity = cfg.nonlinearity.unwrap_or(Nonlinearity::Zero);
                spec.clamp = cfg.clamp;
                spec.phi0 = cfg.phi0.unwrap_or(FieldKind::Sine).build(cfg.a, cfg.b, cfg.mode_index);
                spec.psi0 = cfg.psi0.unwrap_or(FieldKind::Zero).build(cfg.a, cfg.b, cfg.mode_index);
                (spec, Reference::None)
            }
        };
        spec.validate()?;
        Ok(Self { tag, spec, reference, quad_order: cfg.quad_order })
    }
}

/// `field(x + a)`, moving the data onto `[0, L]` for the series.
fn shifted(field: &InitialField, a: f64) -> InitialField {
    let v = field.clone();
    let d = field.clone();
    InitialField::new(Arc::new(move |x| v.value(x + a)), Arc::new(move |x| d.deriv(x + a)))
}
