//! Mass and stiffness assembly, projections and reconstruction on the
//! boundary-adapted Legendre basis.
//!
//! All integrals are evaluated by Gauss quadrature (default order `2N`).
//! In closed form, on `[a, b]`,
//!
//! ```text
//! m_jj     = (b - a) / (2j + 1) + (b - a) / (2j + 5)
//! m_j,j+2  = -(b - a) / (2j + 5)
//! s_jj     = (4j + 6) * 2 / (b - a)
//! ```

use crate::error::Result;
use crate::legendre::{gauss_rule, Basis, QuadratureRule};
use crate::linalg::{factor, ParitySplitSystem};

pub use crate::linalg::BandedSymMatrix;

/// Default number of Gauss points for a truncation `N`.
pub fn default_quadrature_order(n: usize) -> usize {
    2 * n
}

/// A basis together with its quadrature rule, tabulated basis values at the
/// nodes, and the assembled mass and stiffness matrices.
#[derive(Debug, Clone)]
pub struct SpectralSpace {
    basis: Basis,
    rule: QuadratureRule,
    /// `values[r][k] = chi_r(x_k)`
    values: Vec<Vec<f64>>,
    /// `derivs[r][k] = chi_r'(x_k)`
    derivs: Vec<Vec<f64>>,
    mass: BandedSymMatrix,
    stiffness: Vec<f64>,
    mass_factors: ParitySplitSystem,
}

impl SpectralSpace {
    pub fn new(basis: Basis) -> Result<Self> {
        Self::with_quadrature(basis, default_quadrature_order(basis.truncation()))
    }

    pub fn with_quadrature(basis: Basis, order: usize) -> Result<Self> {
        let (a, b) = basis.domain();
        let rule = gauss_rule(order, a, b)?;
        let dim = basis.dim();
        let mut values = vec![Vec::with_capacity(order); dim];
        let mut derivs = vec![Vec::with_capacity(order); dim];
        for &x in rule.nodes() {
            let (v, d) = basis.eval_all(x);
            for r in 0..dim {
                values[r].push(v[r]);
                derivs[r].push(d[r]);
            }
        }
        let w = rule.weights();
        let inner = |f: &[f64], g: &[f64]| -> f64 { f.iter().zip(g).zip(w).map(|((p, q), w)| p * q * w).sum() };
        let mass_diag: Vec<f64> = (0..dim).map(|j| inner(&values[j], &values[j])).collect();
        let mass_off2: Vec<f64> = (0..dim.saturating_sub(2)).map(|j| inner(&values[j], &values[j + 2])).collect();
        let stiffness: Vec<f64> = (0..dim).map(|j| inner(&derivs[j], &derivs[j])).collect();
        let mass = BandedSymMatrix::new(mass_diag, mass_off2)?;
        let mass_factors = factor(1.0, 0.0, &mass, &stiffness)?;
        Ok(Self { basis, rule, values, derivs, mass, stiffness, mass_factors })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    pub fn mass(&self) -> &BandedSymMatrix {
        &self.mass
    }

    /// Diagonal of the stiffness matrix.
    pub fn stiffness(&self) -> &[f64] {
        &self.stiffness
    }

    /// `r_j = sum_k w_k g_k chi_j(x_k)` for samples `g_k` at the nodes.
    pub fn moments(&self, samples: &[f64]) -> Vec<f64> {
        let weighted: Vec<f64> = samples.iter().zip(self.rule.weights()).map(|(g, w)| g * w).collect();
        self.values.iter().map(|row| row.iter().zip(&weighted).map(|(c, g)| c * g).sum()).collect()
    }

    /// `r_j = sum_k w_k g'_k chi_j'(x_k)` for derivative samples.
    pub fn derivative_moments(&self, deriv_samples: &[f64]) -> Vec<f64> {
        let weighted: Vec<f64> = deriv_samples.iter().zip(self.rule.weights()).map(|(g, w)| g * w).collect();
        self.derivs.iter().map(|row| row.iter().zip(&weighted).map(|(c, g)| c * g).sum()).collect()
    }

    /// `L^2` projection of node samples: solves `M c = r`.
    pub fn project_l2_samples(&self, samples: &[f64]) -> Result<Vec<f64>> {
        self.mass_factors.solve(&self.moments(samples))
    }

    pub fn project_l2<F: Fn(f64) -> f64>(&self, g: F) -> Result<Vec<f64>> {
        let samples: Vec<f64> = self.nodes().iter().map(|&x| g(x)).collect();
        self.project_l2_samples(&samples)
    }

    /// `H^1_0` projection from the derivative `g'`; `S` is diagonal.
    pub fn project_h1<F: Fn(f64) -> f64>(&self, g_prime: F) -> Vec<f64> {
        let samples: Vec<f64> = self.nodes().iter().map(|&x| g_prime(x)).collect();
        self.derivative_moments(&samples).iter().zip(&self.stiffness).map(|(r, s)| r / s).collect()
    }

    /// Field values at the quadrature nodes.
    pub fn values_at_nodes(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rule.order()];
        for (c, row) in coeffs.iter().zip(&self.values) {
            if *c == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(row) {
                *o += c * v;
            }
        }
        out
    }

    pub fn reconstruct(&self, coeffs: &[f64], xs: &[f64]) -> Vec<f64> {
        reconstruct(&self.basis, coeffs, xs)
    }
}

/// Stiffness diagonal computed from the closed form `(4d + 6) * 2 / (b - a)`.
pub fn stiffness(basis: &Basis) -> Vec<f64> {
    (0..basis.dim()).map(|d| (4.0 * d as f64 + 6.0) * 2.0 / basis.length()).collect()
}

/// Mass matrix from its closed form.
pub fn mass(basis: &Basis) -> BandedSymMatrix {
    let len = basis.length();
    let dim = basis.dim();
    let diag = (0..dim).map(|j| len / (2.0 * j as f64 + 1.0) + len / (2.0 * j as f64 + 5.0)).collect();
    let off2 = (0..dim.saturating_sub(2)).map(|j| -len / (2.0 * j as f64 + 5.0)).collect();
    BandedSymMatrix::new(diag, off2).expect("consistent band lengths")
}

/// `sum_l c_l chi_l(x)` at each point.
pub fn reconstruct(basis: &Basis, coeffs: &[f64], xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let (v, _) = basis.eval_all(x);
            v.iter().zip(coeffs).map(|(b, c)| b * c).sum()
        })
        .collect()
}
