use std::f64::consts::PI;

use vofwave::oracle::{caputo_by_quadrature, series_solution, ModalSeries};
use vofwave::special::{mode_t1, mode_t1_prime, mode_t1_second, mode_t2, mode_t2_prime, mode_t2_second};
use vofwave::InitialField;

type ModeFn = fn(f64, f64, f64) -> vofwave::Result<f64>;

/// `T'' + D^mu T + kappa T` with the Caputo term from adaptive quadrature of `T'`.
fn ode_residual(which: u8, kappa: f64, mu: f64, t: f64) -> f64 {
    let (value, prime, second): (ModeFn, ModeFn, ModeFn) =
        if which == 1 { (mode_t1, mode_t1_prime, mode_t1_second) } else { (mode_t2, mode_t2_prime, mode_t2_second) };
    let frac = caputo_by_quadrature(|r| prime(kappa, mu, r).unwrap(), mu, t, 1e-12);
    second(kappa, mu, t).unwrap() + frac + kappa * value(kappa, mu, t).unwrap()
}

#[test]
fn modes_satisfy_the_fractional_ode() {
    for mu in [0.0, 0.25, 0.5, 0.9] {
        for kappa in [1.0, PI * PI, 4.0 * PI * PI] {
            for t in [0.1, 0.5, 1.0] {
                for which in [1, 2] {
                    let r = ode_residual(which, kappa, mu, t);
                    assert!(r.abs() < 1e-6, "T{which} mu={mu} kappa={kappa} t={t}: {r}");
                }
            }
        }
    }
}

#[test]
fn modes_match_independent_inversion() {
    // inverse-Laplace values of (s + s^{mu-1}) / (s^2 + s^mu + kappa) and 1 / (s^2 + s^mu + kappa)
    let k = PI * PI;
    assert!((mode_t1(k, 0.5, 0.25).unwrap() - 0.713_335_296_229_371_4).abs() < 1e-12);
    assert!((mode_t1(k, 0.5, 0.5).unwrap() - 0.059_036_578_895_550_88).abs() < 1e-12);
    assert!((mode_t2(k, 0.5, 0.25).unwrap() - 0.216_544_990_266_131_7).abs() < 1e-12);
}

#[test]
fn undamped_limit_is_a_damped_cosine() {
    // mu = 0: T'' + T - T(0) + kappa T = 0 with T(0) = 1
    let kappa = 3.0;
    let w = (kappa + 1.0f64).sqrt();
    for t in [0.2, 0.7, 1.3] {
        let expect = (1.0 + kappa * (w * t).cos()) / (kappa + 1.0);
        assert!((mode_t1(kappa, 0.0, t).unwrap() - expect).abs() < 1e-12);
        assert!((mode_t2(kappa, 0.0, t).unwrap() - (w * t).sin() / w).abs() < 1e-12);
    }
}

#[test]
fn series_of_a_single_sine_mode() {
    let phi0 = InitialField::sine(0.0, 1.0, 1);
    let psi0 = InitialField::zero();
    let v = series_solution(1, 0.5, 1.0, &phi0, &psi0, 0.5, 0.25).unwrap();
    assert!((v.value - 0.713_335_296_229_371_4).abs() < 1e-12);
    assert!(v.tail_estimate < 1e-12);
    let s = ModalSeries::new(3, 0.5, 2.0, &InitialField::bubble(0.0, 2.0), &psi0).unwrap();
    assert!((s.kappa(2) - PI * PI).abs() < 1e-15);
    // at t = 0 the series reproduces the projection of the bubble
    assert!((s.eval(1.0, 0.0).unwrap() - 1.0).abs() < 0.05);
    assert!(s.tail_estimate() > 0.0);
}

#[test]
fn series_field_satisfies_the_pde() {
    // Phi_tt + D^mu Phi - Phi_xx at an interior point, all derivatives independent
    let mu = 0.5;
    let phi0 = InitialField::sine(0.0, 1.0, 1);
    let psi0 = InitialField::sine(0.0, 1.0, 2);
    let series = ModalSeries::new(2, mu, 1.0, &phi0, &psi0).unwrap();
    let (x, t) = (0.3, 0.6);
    let field = |x: f64, t: f64| series.eval(x, t).unwrap();
    let h = 1e-3;
    let phi_xx = (field(x + h, t) - 2.0 * field(x, t) + field(x - h, t)) / (h * h);
    let phi_tt = (field(x, t + h) - 2.0 * field(x, t) + field(x, t - h)) / (h * h);
    let dphi = |r: f64| (field(x, r + 1e-6) - field(x, (r - 1e-6).max(0.0))) / (r + 1e-6 - (r - 1e-6).max(0.0));
    let frac = caputo_by_quadrature(dphi, mu, t, 1e-10);
    let r = phi_tt + frac - phi_xx;
    assert!(r.abs() < 1e-4, "{r}");
}
