//! Python bindings for the vofwave solver.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use vofwave::caputo::KernelWeights;
use vofwave::harness::{self, ConvergenceTable, Ladder, RunConfig};
use vofwave::special::{self, MlParams};

fn to_py(e: vofwave::Error) -> PyErr {
    match e {
        vofwave::Error::Config(_) | vofwave::Error::Domain(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    special::gamma(x).map_err(to_py)
}

/// Bivariate Mittag-Leffler function `E_{(a1, a2), b}(z1, z2)`.
#[pyfunction]
#[pyo3(signature = (alpha1, alpha2, beta, z1, z2, tol = 1e-14))]
fn ml2(alpha1: f64, alpha2: f64, beta: f64, z1: f64, z2: f64, tol: f64) -> PyResult<f64> {
    let params = MlParams::new(alpha1, alpha2, beta).map_err(to_py)?;
    special::ml2(params, z1, z2, tol).map_err(to_py)
}

/// Mode functions `(T1(t), T2(t))` of `T'' + D^mu T' + kappa T = 0`.
#[pyfunction]
fn mode_functions(kappa: f64, mu: f64, t: f64) -> PyResult<(f64, f64)> {
    Ok((special::mode_t1(kappa, mu, t).map_err(to_py)?, special::mode_t2(kappa, mu, t).map_err(to_py)?))
}

#[pyfunction]
fn caputo_t2(mu: f64, t: f64) -> f64 {
    vofwave::oracle::caputo_t2(mu, t)
}

/// Discrete Caputo weights `(a, b)` at step `k`.
#[pyfunction]
fn kernel_weights(k: usize, tau: f64, mu: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let w = KernelWeights::with_order(k, tau, mu).map_err(to_py)?;
    Ok((w.a().to_vec(), w.b().to_vec()))
}

/// Gauss-Legendre nodes and weights on `[a, b]`.
#[pyfunction]
#[pyo3(signature = (order, a = 0.0, b = 1.0))]
fn gauss_rule(order: usize, a: f64, b: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let rule = vofwave::legendre::gauss_rule(order, a, b).map_err(to_py)?;
    Ok((rule.nodes().to_vec(), rule.weights().to_vec()))
}

#[pyfunction]
fn co_rate(e1: f64, e2: f64, m1: f64, m2: f64) -> Option<f64> {
    harness::co_rate(e1, e2, m1, m2)
}

#[pyfunction]
fn ao_rate(e: f64, n: usize) -> Option<f64> {
    harness::ao_rate(e, n)
}

#[pyclass(name = "MuProfile", frozen)]
struct PyMuProfile(vofwave::MuProfile);

#[pymethods]
impl PyMuProfile {
    #[new]
    fn new(kind: &str, start: f64, end: f64, horizon: f64) -> PyResult<Self> {
        vofwave::MuProfile::from_kind(kind, start, end, horizon).map(Self).map_err(to_py)
    }

    fn __call__(&self, t: f64) -> PyResult<f64> {
        self.0.eval(t).map_err(to_py)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind()
    }

    #[getter]
    fn horizon(&self) -> f64 {
        self.0.horizon()
    }

    #[getter]
    fn mu_bar(&self) -> f64 {
        self.0.mu_bar()
    }
}

/// A problem built from config text in the CLI format.
#[pyclass(name = "Experiment", frozen)]
struct PyExperiment {
    cfg: RunConfig,
    exp: harness::Experiment,
}

#[pymethods]
impl PyExperiment {
    #[new]
    #[pyo3(signature = (config = ""))]
    fn new(config: &str) -> PyResult<Self> {
        let cfg = RunConfig::parse(config).map_err(to_py)?;
        Self::build(cfg)
    }

    #[staticmethod]
    fn benchmark(tag: &str) -> PyResult<Self> {
        Self::new(&format!("problem = {tag}"))
    }

    #[getter]
    fn tag(&self) -> String {
        self.exp.tag.clone()
    }

    #[getter]
    fn horizon(&self) -> f64 {
        self.exp.spec.horizon
    }

    /// Solve once; returns a `Run`.
    #[pyo3(signature = (n_modes = None, n_steps = None))]
    fn run(&self, py: Python<'_>, n_modes: Option<usize>, n_steps: Option<usize>) -> PyResult<PyRun> {
        let (n, m) = (n_modes.unwrap_or(self.cfg.n_modes), n_steps.unwrap_or(self.cfg.n_steps));
        let outcome = py.detach(|| harness::run_single(&self.exp, n, m)).map_err(to_py)?;
        Ok(PyRun { outcome })
    }

    /// Convergence table as `[(param, error, order)]` for `"time"` or `"space"`.
    fn table(&self, py: Python<'_>, ladder: &str) -> PyResult<Vec<(f64, Option<f64>, Option<f64>)>> {
        let ladder = Ladder::from_tag(ladder).map_err(to_py)?;
        let (table, _): (ConvergenceTable, _) = py.detach(|| harness::run_table(&self.exp, &self.cfg, ladder));
        Ok(table.rows.iter().map(|r| (r.param, r.error, r.order)).collect())
    }
}

impl PyExperiment {
    fn build(cfg: RunConfig) -> PyResult<Self> {
        cfg.validate().map_err(to_py)?;
        let exp = harness::Experiment::from_config(&cfg).map_err(to_py)?;
        Ok(Self { cfg, exp })
    }
}

#[pyclass(name = "Run", frozen)]
struct PyRun {
    outcome: harness::RunOutcome,
}

#[pymethods]
impl PyRun {
    /// Max-in-time L2 error against the reference, if there is one.
    #[getter]
    fn error(&self) -> Option<f64> {
        self.outcome.error
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.outcome.solver.tau()
    }

    #[getter]
    fn n_steps(&self) -> usize {
        self.outcome.solver.n_steps()
    }

    /// Spectral coefficients at step `i` (default: last).
    #[pyo3(signature = (i = None))]
    fn coefficients(&self, i: Option<usize>) -> Vec<f64> {
        let i = i.unwrap_or(self.outcome.solver.n_steps()).min(self.outcome.solver.n_steps());
        self.outcome.state.u(i).to_vec()
    }

    /// The field at points `xs` and step `i` (default: last).
    #[pyo3(signature = (xs, i = None))]
    fn field(&self, xs: Vec<f64>, i: Option<usize>) -> Vec<f64> {
        self.outcome.solver.space().reconstruct(&self.coefficients(i), &xs)
    }
}

#[pymodule]
pub fn pyvofwave(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(ml2, m)?)?;
    m.add_function(wrap_pyfunction!(mode_functions, m)?)?;
    m.add_function(wrap_pyfunction!(caputo_t2, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_weights, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_rule, m)?)?;
    m.add_function(wrap_pyfunction!(co_rate, m)?)?;
    m.add_function(wrap_pyfunction!(ao_rate, m)?)?;
    m.add_class::<PyMuProfile>()?;
    m.add_class::<PyExperiment>()?;
    m.add_class::<PyRun>()?;
    Ok(())
}
