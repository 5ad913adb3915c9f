//! Single runs and parameter sweeps.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::Benchmark;
use crate::stepper::{SolveReport, Solver, SpectralState};

use super::config::{ProblemKind, RunConfig};
use super::experiment::Experiment;
use super::table::{ConvergenceTable, Ladder};

/// Step count for a step size that must divide the horizon.
pub fn steps_for(horizon: f64, tau: f64) -> Result<usize> {
    let steps = (horizon / tau).round();
    if steps < 2.0 || ((horizon / steps) - tau).abs() > 1e-9 * tau {
        return Err(Error::Config(format!("step size {tau} does not divide the horizon {horizon} into at least 2 steps")));
    }
    Ok(steps as usize)
}

pub struct RunOutcome {
    pub solver: Solver,
    pub state: SpectralState,
    pub report: SolveReport,
    pub error: Option<f64>,
}

/// One solve with truncation `n_modes` and `n_steps` steps, plus its error
/// when the experiment has a reference.
pub fn run_single(exp: &Experiment, n_modes: usize, n_steps: usize) -> Result<RunOutcome> {
    let solver = Solver::with_quadrature(&exp.spec, n_modes, n_steps, exp.quad_order)?;
    let (state, report) = solver.run()?;
    let error = match exp.reference.max_error(solver.space(), &state) {
        Ok(e) => Some(e),
        Err(Error::Config(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(RunOutcome { solver, state, report, error })
}

fn run_error(exp: &Experiment, n_modes: usize, n_steps: usize) -> Result<f64> {
    run_single(exp, n_modes, n_steps)?
        .error
        .ok_or_else(|| Error::Config(format!("problem `{}` has no reference solution", exp.tag)))
}

/// Sweep step sizes at the configured truncation, or truncations at the
/// configured step count. Rows run concurrently; failures are kept per row.
pub fn run_table(exp: &Experiment, cfg: &RunConfig, ladder: Ladder) -> (ConvergenceTable, Duration) {
    let start = Instant::now();
    let params: Vec<f64> = match ladder {
        Ladder::Time => cfg.taus.clone(),
        Ladder::Space => cfg.ns.iter().map(|&n| n as f64).collect(),
    };
    let sink: Mutex<Vec<(usize, f64, Result<f64>)>> = Mutex::new(Vec::with_capacity(params.len()));
    params.par_iter().enumerate().for_each(|(i, &p)| {
        let result = match ladder {
            Ladder::Time => steps_for(exp.spec.horizon, p).and_then(|steps| run_error(exp, cfg.n_modes, steps)),
            Ladder::Space => run_error(exp, p as usize, cfg.n_steps),
        };
        sink.lock().expect("table sink poisoned").push((i, p, result));
    });
    let mut rows = sink.into_inner().expect("table sink poisoned");
    rows.sort_by_key(|(i, _, _)| *i);
    let fixed = match ladder {
        Ladder::Time => format!("N={}", cfg.n_modes),
        Ladder::Space => format!("n={}", cfg.n_steps),
    };
    let results = rows.into_iter().map(|(_, p, r)| (p, r)).collect();
    (ConvergenceTable::with_orders(exp.tag.clone(), ladder, fixed, results, exp.spec.horizon), start.elapsed())
}

/// Time and space ladders for every benchmark with the default grids.
pub fn benchmark_tables() -> Result<Vec<ConvergenceTable>> {
    let mut out = Vec::new();
    for bench in Benchmark::ALL {
        let cfg = RunConfig { problem: ProblemKind::Benchmark(bench), ..RunConfig::default() };
        let exp = Experiment::from_config(&cfg)?;
        for ladder in [Ladder::Time, Ladder::Space] {
            out.push(run_table(&exp, &cfg, ladder).0);
        }
    }
    Ok(out)
}

/// `(x, t, phi)` samples of a finished run at the step nearest to each
/// requested time (the final time when none are given).
pub fn field_samples(outcome: &RunOutcome, times: &[f64], points: usize) -> Result<Vec<(f64, f64, f64)>> {
    let solver = &outcome.solver;
    let n = solver.n_steps();
    let horizon = solver.spec().horizon;
    let steps: Vec<usize> = if times.is_empty() {
        vec![n]
    } else {
        times
            .iter()
            .map(|&t| {
                if !(0.0..=horizon).contains(&t) {
                    return Err(Error::Config(format!("dump time {t} outside [0, {horizon}]")));
                }
                Ok(((t / solver.tau()).round() as usize).min(n))
            })
            .collect::<Result<_>>()?
    };
    let (a, b) = solver.space().basis().domain();
    let xs: Vec<f64> = (0..points).map(|k| a + (b - a) * k as f64 / (points - 1) as f64).collect();
    let mut out = Vec::with_capacity(steps.len() * points);
    for i in steps {
        let t = solver.time(i);
        for (x, phi) in xs.iter().zip(solver.space().reconstruct(outcome.state.u(i), &xs)) {
            out.push((*x, t, phi));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_counts() {
        assert_eq!(steps_for(1.0, 0.000625).unwrap(), 1600);
        assert_eq!(steps_for(2.0, 0.25).unwrap(), 8);
        assert!(steps_for(1.0, 0.3).is_err());
        assert!(steps_for(1.0, 0.9).is_err());
    }

    #[test]
    fn failed_rows_are_kept() {
        let cfg = RunConfig { taus: vec![0.1, 0.3, 0.05], n_modes: 8, ..RunConfig::default() };
        let exp = Experiment::from_config(&cfg).unwrap();
        let (t, _) = run_table(&exp, &cfg, Ladder::Time);
        assert_eq!(t.rows.len(), 3);
        assert!(t.rows[0].error.is_some() && t.rows[2].error.is_some());
        assert!(t.rows[1].failure.is_some() && t.rows[1].error.is_none());
        assert_eq!(t.rows[2].order, None);
    }
}
