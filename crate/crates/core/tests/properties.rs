mod common;

use proptest::prelude::*;

use vofwave::caputo::KernelWeights;
use vofwave::legendre::{gauss_rule, legendre_eval_upto, Basis};
use vofwave::linalg::{apply_system, factor, BandedSymMatrix};
use vofwave::special::{gamma, ml2, MlParams};

#[test]
fn weight_identities_over_random_draws() {
    let (worst, violations) = common::weight_identity_defects(200, 7);
    assert!(worst < 1e-12, "{worst}");
    assert_eq!(violations, 0);
}

#[test]
fn banded_solver_matches_dense() {
    assert!(common::banded_vs_dense_random(50, 11) < 1e-10);
    assert!(common::banded_vs_dense_steps() < 1e-10);
}

#[test]
fn quadrature_assembly_matches_closed_forms() {
    assert!(common::mass_stiffness_defect() < 1e-12);
}

#[test]
fn symmetric_data_keeps_odd_coefficients_zero() {
    let (odd, all) = common::parity_leak();
    assert!(all > 0.1);
    assert!(odd < 1e-12, "{odd}");
}

#[test]
fn linear_problems_superpose() {
    assert!(common::superposition_defect(4, 3) < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn weights_telescope(k in 1usize..400, tau in 1e-4f64..0.2, mu in 0.0f64..0.999) {
        let w = KernelWeights::with_order(k, tau, mu).unwrap();
        let b = w.b();
        prop_assert!(b.iter().sum::<f64>().abs() <= 1e-12 * w.leading());
        prop_assert!(b[..k].iter().all(|&x| x <= 0.0));
        let lead = tau.powf(-mu) / gamma(1.0 - mu).unwrap();
        prop_assert!((w.leading() - lead).abs() <= 1e-13 * lead);
    }

    #[test]
    fn history_of_constants_vanishes(k in 1usize..200, mu in 0.0f64..0.99, c in -10.0f64..10.0) {
        let w = KernelWeights::with_order(k, 0.01, mu).unwrap();
        let v = w.apply_history(&vec![c; k + 1]).unwrap();
        prop_assert!(v.abs() <= 1e-12 * w.leading() * (1.0 + c.abs()));
    }

    #[test]
    fn zero_order_history_is_an_increment(k in 1usize..100, xs in prop::collection::vec(-5.0f64..5.0, 101)) {
        let w = KernelWeights::with_order(k, 0.03, 0.0).unwrap();
        let v = w.apply_history(&xs[..=k]).unwrap();
        prop_assert_eq!(v, xs[k] - xs[0]);
    }

    #[test]
    fn gamma_recurrence(x in 0.05f64..60.0) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs());
    }

    #[test]
    fn single_argument_series_is_exponential(z in -20.0f64..5.0) {
        // alpha2 = 1, beta = 1 and z1 = 0 reduce the series to exp(z2);
        // for negative z the alternating terms cost about e^|z| ulps
        let p = MlParams::new(2.0, 1.0, 1.0).unwrap();
        let v = ml2(p, 0.0, z, 1e-17).unwrap();
        prop_assert!((v - z.exp()).abs() <= 1e-14 * z.abs().exp());
    }

    #[test]
    fn gauss_rules_integrate_polynomials(q in 1usize..40, deg_frac in 0.0f64..1.0, a in -3.0f64..0.0, len in 0.1f64..4.0) {
        let b = a + len;
        let deg = ((2 * q - 1) as f64 * deg_frac) as i32;
        let rule = gauss_rule(q, a, b).unwrap();
        let exact = (b.powi(deg + 1) - a.powi(deg + 1)) / (deg + 1) as f64;
        let got = rule.integrate(|x| x.powi(deg));
        prop_assert!((got - exact).abs() <= 1e-12 * exact.abs().max(1.0) * 4f64.powi(deg.min(30)));
    }

    #[test]
    fn legendre_values_bounded(n in 0usize..60, x in -1.0f64..1.0) {
        prop_assert!(legendre_eval_upto(n, x).iter().all(|v| v.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn basis_vanishes_at_endpoints(n in 2usize..40, a in -2.0f64..2.0, len in 0.1f64..3.0) {
        let basis = Basis::new(n, a, a + len).unwrap();
        for r in 0..basis.dim() {
            prop_assert!(basis.chi(r, a).unwrap().abs() < 1e-12);
            prop_assert!(basis.chi(r, a + len).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn parity_split_solve_inverts_the_operator(
        diag in prop::collection::vec(1.0f64..3.0, 1..40),
        d in 0.1f64..1e3,
        beta in 0.0f64..3.0,
        seed in 0u64..1000,
    ) {
        let dim = diag.len();
        let off2: Vec<f64> = (0..dim.saturating_sub(2)).map(|j| 0.4 * ((seed + j as u64) as f64).sin()).collect();
        let m = BandedSymMatrix::new(diag, off2).unwrap();
        let s: Vec<f64> = (0..dim).map(|j| 1.0 + j as f64).collect();
        let rhs: Vec<f64> = (0..dim).map(|j| ((seed * 31 + j as u64) as f64).cos()).collect();
        let x = factor(d, beta, &m, &s).unwrap().solve(&rhs).unwrap();
        let back = apply_system(d, beta, &m, &s, &x);
        for (u, v) in back.iter().zip(&rhs) {
            prop_assert!((u - v).abs() < 1e-10);
        }
    }
}
