//! Property checks shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use vofwave::caputo::weights;
use vofwave::galerkin::{mass, stiffness, SpectralSpace};
use vofwave::legendre::Basis;
use vofwave::linalg::{dense, factor, BandedSymMatrix};
use vofwave::oracle::Benchmark;
use vofwave::stepper::SpaceTimeFn;
use vofwave::{InitialField, MuProfile, ProblemSpec, Solver};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_profile(rng: &mut StdRng, horizon: f64) -> MuProfile {
    let kinds = ["constant", "linear", "quadratic", "oscillating", "sinusoidal", "piecewise"];
    loop {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let start = rng.gen_range(0.0..0.99);
        let end = rng.gen_range(0.0..0.99);
        // the sinusoidal profile can overshoot its endpoints
        if let Ok(p) = MuProfile::from_kind(kind, start, end, horizon) {
            return p;
        }
    }
}

/// Largest relative defect of `sum b = 0`, `b_0 = -a_1`, `b_k = a_k`, and
/// the count of sign or monotonicity violations, over random draws.
pub fn weight_identity_defects(draws: usize, seed: u64) -> (f64, usize) {
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..draws {
        let k = rng.gen_range(1..=300usize);
        let tau = rng.gen_range(1e-4..(1.0 / k as f64).min(0.5));
        let profile = random_profile(&mut rng, 1.0);
        let w = weights(k, tau, &profile).unwrap();
        let (a, b) = (w.a(), w.b());
        let scale = b[k].abs();
        worst = worst.max(b.iter().sum::<f64>().abs() / scale);
        worst = worst.max((b[0] + a[0]).abs() / scale);
        worst = worst.max((b[k] - a[k - 1]).abs() / scale);
        violations += b[..k].iter().filter(|&&x| x > 0.0).count();
        violations += a.windows(2).filter(|p| p[1] < p[0]).count();
    }
    (worst, violations)
}

fn dense_system(d: f64, beta: f64, m: &BandedSymMatrix, s: &[f64]) -> Vec<Vec<f64>> {
    let mut a = m.to_dense();
    for (i, row) in a.iter_mut().enumerate() {
        for v in row.iter_mut() {
            *v *= d;
        }
        row[i] += beta * s[i];
    }
    a
}

fn rel_diff(x: &[f64], y: &[f64]) -> f64 {
    let scale = y.iter().fold(f64::MIN_POSITIVE, |m, v| m.max(v.abs()));
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
}

/// Parity-split solve against dense LU on random diagonally dominant systems.
pub fn banded_vs_dense_random(systems: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..systems {
        let dim = rng.gen_range(1..=60usize);
        let off2: Vec<f64> = (0..dim.saturating_sub(2)).map(|_| rng.gen_range(-0.45..0.45)).collect();
        let diag: Vec<f64> = (0..dim).map(|_| rng.gen_range(1.0..3.0)).collect();
        let m = BandedSymMatrix::new(diag, off2).unwrap();
        let s: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..50.0)).collect();
        let d = rng.gen_range(0.1..1e4);
        let beta = rng.gen_range(0.0..2.0);
        let rhs: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let banded = factor(d, beta, &m, &s).unwrap().solve(&rhs).unwrap();
        let full = dense::lu_solve(dense_system(d, beta, &m, &s), rhs).unwrap();
        worst = worst.max(rel_diff(&banded, &full));
    }
    worst
}

/// Parity-split solve against dense LU on every step of benchmark runs.
pub fn banded_vs_dense_steps() -> f64 {
    let mut worst: f64 = 0.0;
    for bench in [Benchmark::SineOscillating, Benchmark::QuarticQuadratic, Benchmark::SinePiecewise] {
        let spec = bench.manufactured().problem_spec();
        let solver = Solver::new(&spec, 20, 30).unwrap();
        let (m, s) = (solver.space().mass(), solver.space().stiffness());
        let mut state = solver.init().unwrap();
        for _ in 0..solver.n_steps() {
            let sys = solver.assemble(&state).unwrap();
            let banded = factor(sys.d, sys.beta, m, s).unwrap().solve(&sys.rhs).unwrap();
            let full = dense::lu_solve(dense_system(sys.d, sys.beta, m, s), sys.rhs.clone()).unwrap();
            worst = worst.max(rel_diff(&banded, &full));
            solver.step(&mut state).unwrap();
        }
    }
    worst
}

/// Quadrature-assembled mass and stiffness against their closed forms.
pub fn mass_stiffness_defect() -> f64 {
    let mut worst: f64 = 0.0;
    for &(a, b) in &[(0.0, 1.0), (-1.0, 1.0), (-0.3, 2.2), (1.0, 1.5)] {
        for n in [4usize, 9, 20, 50] {
            let basis = Basis::new(n, a, b).unwrap();
            let space = SpectralSpace::new(basis).unwrap();
            let (m, s) = (mass(&basis), stiffness(&basis));
            for i in 0..basis.dim() {
                worst = worst.max((space.stiffness()[i] - s[i]).abs() / s[i]);
                for j in 0..basis.dim() {
                    worst = worst.max((space.mass().get(i, j) - m.get(i, j)).abs());
                }
            }
        }
    }
    worst
}

/// Largest odd-index coefficient over a run with data symmetric about the
/// midpoint, and the largest coefficient overall.
pub fn parity_leak() -> (f64, f64) {
    let spec = Benchmark::SineOscillating.manufactured().problem_spec();
    let (state, _) = vofwave::stepper::run(&spec, 24, 100).unwrap();
    let mut odd: f64 = 0.0;
    let mut all: f64 = 0.0;
    for u in state.trajectory() {
        for (j, c) in u.iter().enumerate() {
            all = all.max(c.abs());
            if j % 2 == 1 {
                odd = odd.max(c.abs());
            }
        }
    }
    (odd, all)
}

/// Linear data for the superposition test.
#[derive(Clone, Copy)]
pub struct LinearData {
    pub sine: f64,
    pub bubble: f64,
    pub velocity: f64,
    pub source: f64,
}

impl LinearData {
    pub fn random(rng: &mut StdRng) -> Self {
        Self {
            sine: rng.gen_range(-1.0..1.0),
            bubble: rng.gen_range(-1.0..1.0),
            velocity: rng.gen_range(-1.0..1.0),
            source: rng.gen_range(-1.0..1.0),
        }
    }

    pub fn combine(self, c1: f64, other: Self, c2: f64) -> Self {
        Self {
            sine: c1 * self.sine + c2 * other.sine,
            bubble: c1 * self.bubble + c2 * other.bubble,
            velocity: c1 * self.velocity + c2 * other.velocity,
            source: c1 * self.source + c2 * other.source,
        }
    }

    pub fn spec(self, profile: &MuProfile) -> ProblemSpec {
        let mut spec = ProblemSpec::homogeneous(0.0, 1.0, 1.0, profile.clone());
        let (s, b, v, q) = (self.sine, self.bubble, self.velocity, self.source);
        spec.phi0 = InitialField::new(
            Arc::new(move |x| s * (PI * x).sin() + b * x * (1.0 - x)),
            Arc::new(move |x| s * PI * (PI * x).cos() + b * (1.0 - 2.0 * x)),
        );
        spec.psi0 = InitialField::new(Arc::new(move |x| v * (2.0 * PI * x).sin()), Arc::new(move |x| v * 2.0 * PI * (2.0 * PI * x).cos()));
        let source: SpaceTimeFn = Arc::new(move |x, t| q * (1.0 + t) * x.exp());
        spec.source = Some(source);
        spec
    }
}

/// Relative superposition defect `|U(c1 d1 + c2 d2) - c1 U(d1) - c2 U(d2)|` over random data.
pub fn superposition_defect(trials: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let profile = random_profile(&mut rng, 1.0);
        let (d1, d2) = (LinearData::random(&mut rng), LinearData::random(&mut rng));
        let (c1, c2) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let run = |d: LinearData| vofwave::stepper::run(&d.spec(&profile), 12, 40).unwrap().0;
        let (s1, s2, s12) = (run(d1), run(d2), run(d1.combine(c1, d2, c2)));
        for i in 0..=40 {
            let expect: Vec<f64> = s1.u(i).iter().zip(s2.u(i)).map(|(a, b)| c1 * a + c2 * b).collect();
            let scale = expect.iter().chain(s12.u(i)).fold(1.0f64, |m, v| m.max(v.abs()));
            let diff = s12.u(i).iter().zip(&expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(diff / scale);
        }
    }
    worst
}
