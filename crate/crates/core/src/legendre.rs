//! Legendre polynomials, the boundary-adapted basis `chi_r = L_r - L_{r+2}`
//! and Gauss-Legendre quadrature.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `L_0(x) ..= L_n(x)` by the three-term recurrence.
pub fn legendre_eval_upto(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// `(L_n(x), L_n'(x))` for `|x| < 1`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let vals = legendre_eval_upto(n, x);
    let ln = vals[n];
    let lm = if n == 0 { 0.0 } else { vals[n - 1] };
    let d = n as f64 * (x * ln - lm) / (x * x - 1.0);
    (ln, d)
}

/// Boundary-adapted Legendre basis `chi_0 ..= chi_{N-2}` on `[a, b]`.
///
/// Every `chi_r` vanishes at both endpoints, so the span is a subspace of
/// `H^1_0(a, b)` containing all polynomials of degree `<= N` with zero
/// boundary values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    n: usize,
    a: f64,
    b: f64,
}

impl Basis {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("spectral truncation must be at least 2, got {n}")));
        }
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!("invalid domain [{a}, {b}]")));
        }
        Ok(Self { n, a, b })
    }

    /// Spectral truncation `N`.
    pub fn truncation(&self) -> usize {
        self.n
    }

    /// Number of basis functions, `N - 1`.
    pub fn dim(&self) -> usize {
        self.n - 1
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// Map `[a, b]` onto the reference interval `[-1, 1]`.
    pub fn to_reference(&self, x: f64) -> f64 {
        (2.0 * x - self.b - self.a) / (self.b - self.a)
    }

    fn check_index(&self, r: usize) -> Result<()> {
        if r >= self.dim() {
            return Err(Error::IndexOutOfRange { index: r, dim: self.dim() });
        }
        Ok(())
    }

    pub fn chi(&self, r: usize, x: f64) -> Result<f64> {
        self.check_index(r)?;
        let l = legendre_eval_upto(r + 2, self.to_reference(x));
        Ok(l[r] - l[r + 2])
    }

    /// `d chi_r / dx = -(2r + 3) L_{r+1}(xhat) * 2 / (b - a)`.
    pub fn chi_deriv(&self, r: usize, x: f64) -> Result<f64> {
        self.check_index(r)?;
        let l = legendre_eval_upto(r + 1, self.to_reference(x));
        Ok(-(2.0 * r as f64 + 3.0) * l[r + 1] * 2.0 / self.length())
    }

    /// All basis values and derivatives at `x`.
    pub fn eval_all(&self, x: f64) -> (Vec<f64>, Vec<f64>) {
        let l = legendre_eval_upto(self.n, self.to_reference(x));
        let jac = 2.0 / self.length();
        let values = (0..self.dim()).map(|r| l[r] - l[r + 2]).collect();
        let derivs = (0..self.dim()).map(|r| -(2.0 * r as f64 + 3.0) * l[r + 1] * jac).collect();
        (values, derivs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `order`-point Gauss-Legendre rule on `[a, b]`, exact for polynomials of
/// degree `<= 2 order - 1`. Nodes are ascending.
pub fn gauss_rule(order: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::Domain("quadrature order must be at least 1".into()));
    }
    if !(b > a) {
        return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
    }
    let mut ref_nodes = vec![0.0; order];
    let mut ref_weights = vec![0.0; order];
    let q = order as f64;
    // roots are symmetric; solve for the positive half
    for i in 0..(order + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (q + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(order, x);
            let dx = p / dp;
            x -= dx;
            deriv = dp;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(order, x);
        if dp.is_finite() {
            deriv = dp;
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        ref_nodes[i] = -x;
        ref_nodes[order - 1 - i] = x;
        ref_weights[i] = w;
        ref_weights[order - 1 - i] = w;
    }
    if order % 2 == 1 {
        ref_nodes[order / 2] = 0.0;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Ok(QuadratureRule {
        nodes: ref_nodes.iter().map(|x| mid + half * x).collect(),
        weights: ref_weights.iter().map(|w| half * w).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_known_values() {
        assert_eq!(legendre_eval_upto(2, 0.0), vec![1.0, 0.0, -0.5]);
        assert_eq!(legendre_eval_upto(3, 1.0), vec![1.0, 1.0, 1.0, 1.0]);
        let l = legendre_eval_upto(4, 0.3);
        // exact rationals: L3(0.3) = -0.3825, L4(0.3) = 0.0729375
        assert!((l[3] + 0.3825).abs() < 1e-15);
        assert!((l[4] - 0.072_937_5).abs() < 1e-15);
    }

    #[test]
    fn legendre_bounded_on_interval() {
        for i in 0..=200 {
            let x = -1.0 + i as f64 / 100.0;
            assert!(legendre_eval_upto(40, x).iter().all(|v| v.abs() <= 1.0 + 1e-13));
        }
    }

    #[test]
    fn basis_values() {
        let basis = Basis::new(8, 0.0, 1.0).unwrap();
        assert_eq!(basis.dim(), 7);
        assert!((basis.chi(0, 0.5).unwrap() - 1.5).abs() < 1e-15);
        for r in 0..basis.dim() {
            assert!(basis.chi(r, 0.0).unwrap().abs() < 1e-14);
            assert!(basis.chi(r, 1.0).unwrap().abs() < 1e-14);
        }
        // xhat = 0.5 at x = 0.75
        assert!((basis.chi(1, 0.75).unwrap() - 0.9375).abs() < 1e-15);
        assert!(matches!(basis.chi(7, 0.5), Err(Error::IndexOutOfRange { index: 7, dim: 7 })));
        assert!(basis.chi_deriv(9, 0.5).is_err());
    }

    #[test]
    fn basis_rejects_bad_input() {
        assert!(Basis::new(1, 0.0, 1.0).is_err());
        assert!(Basis::new(4, 1.0, 1.0).is_err());
    }

    #[test]
    fn jacobi_form_of_basis() {
        // chi_r = (2r + 3) / (2(r + 1)) (1 - x^2) P_r^{(1,1)}(x), and P_r^{(1,1)} = 2 L'_{r+1} / (r + 2)
        let basis = Basis::new(12, -1.0, 1.0).unwrap();
        for r in 0..basis.dim() {
            for &x in &[-0.7, -0.2, 0.1, 0.55, 0.9] {
                let (_, dl) = legendre_with_derivative(r + 1, x);
                let jacobi = 2.0 * dl / (r as f64 + 2.0);
                let alt = (2.0 * r as f64 + 3.0) / (2.0 * (r as f64 + 1.0)) * (1.0 - x * x) * jacobi;
                assert!((basis.chi(r, x).unwrap() - alt).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parity_on_symmetric_domain() {
        let basis = Basis::new(10, -2.0, 3.0).unwrap();
        let m = basis.midpoint();
        for r in 0..basis.dim() {
            for &s in &[0.1, 0.8, 1.7, 2.5] {
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                let lhs = basis.chi(r, m + s).unwrap();
                let rhs = sign * basis.chi(r, m - s).unwrap();
                assert!((lhs - rhs).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn derivative_matches_centered_differences() {
        let basis = Basis::new(9, 0.0, 2.0).unwrap();
        for r in 0..basis.dim() {
            for &x in &[0.3, 1.1, 1.9] {
                let exact = basis.chi_deriv(r, x).unwrap();
                let fd = |h: f64| (basis.chi(r, x + h).unwrap() - basis.chi(r, x - h).unwrap()) / (2.0 * h);
                let e1 = (fd(1e-3) - exact).abs();
                let e2 = (fd(5e-4) - exact).abs();
                assert!(e1 < 1e-3);
                // O(h^2): halving h quarters the error
                assert!(e2 < 0.3 * e1 + 1e-9, "r = {r}, x = {x}: {e1} {e2}");
            }
        }
    }

    #[test]
    fn eval_all_agrees_with_pointwise() {
        let basis = Basis::new(7, -1.0, 2.0).unwrap();
        let (v, d) = basis.eval_all(0.4);
        for r in 0..basis.dim() {
            assert!((v[r] - basis.chi(r, 0.4).unwrap()).abs() < 1e-15);
            assert!((d[r] - basis.chi_deriv(r, 0.4).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn classical_rules() {
        let r2 = gauss_rule(2, -1.0, 1.0).unwrap();
        let s = 1.0 / 3.0f64.sqrt();
        assert!((r2.nodes()[0] + s).abs() < 1e-15 && (r2.nodes()[1] - s).abs() < 1e-15);
        assert!(r2.weights().iter().all(|w| (w - 1.0).abs() < 1e-15));
        let r3 = gauss_rule(3, -1.0, 1.0).unwrap();
        let s = (0.6f64).sqrt();
        assert!((r3.nodes()[0] + s).abs() < 1e-15 && r3.nodes()[1] == 0.0 && (r3.nodes()[2] - s).abs() < 1e-15);
        for (w, e) in r3.weights().iter().zip([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0]) {
            assert!((w - e).abs() < 1e-15);
        }
        let r = gauss_rule(2, 0.0, 1.0).unwrap();
        assert!((r.integrate(|x| x * x) - 1.0 / 3.0).abs() < 1e-15);
        assert!(gauss_rule(0, 0.0, 1.0).is_err());
    }

    #[test]
    fn single_point_rule() {
        let r = gauss_rule(1, 2.0, 4.0).unwrap();
        assert_eq!(r.nodes(), &[3.0]);
        assert_eq!(r.weights(), &[2.0]);
    }

    #[test]
    fn polynomial_exactness() {
        for q in 1..=32 {
            let rule = gauss_rule(q, 0.0, 1.0).unwrap();
            assert!((rule.weights().iter().sum::<f64>() - 1.0).abs() < 1e-13);
            for p in 0..2 * q {
                let exact = 1.0 / (p as f64 + 1.0);
                let approx = rule.integrate(|x| x.powi(p as i32));
                assert!(((approx - exact) / exact).abs() < 1e-12, "q = {q}, p = {p}");
            }
        }
    }
}
