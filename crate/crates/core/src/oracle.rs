//! Ground truth for the solver: manufactured solutions with their sources,
//! the constant-order modal series, an adaptive quadrature route for the
//! Caputo integral, and the max-in-time `L^2` error.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galerkin::SpectralSpace;
use crate::legendre::gauss_rule;
use crate::profiles::{CoefficientFn, MuProfile};
use crate::special::{mode_t1, mode_t2, reciprocal_gamma};
use crate::stepper::{InitialField, Nonlinearity, ProblemSpec, SpectralState};

/// Caputo derivative of order `mu` of `t^2`: `2 t^{2-mu} / Gamma(3 - mu)`.
pub fn caputo_t2(mu: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    2.0 * t.powf(2.0 - mu) * reciprocal_gamma(3.0 - mu)
}

// Gauss-Kronrod 7/15 abscissae and weights
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = G7_WEIGHTS[3] * fc;
    for j in 0..7 {
        let dx = half * GK_NODES[j];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += GK_WEIGHTS[j] * pair;
        if j % 2 == 1 {
            gauss += G7_WEIGHTS[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn adaptive_step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return value;
    }
    let mid = 0.5 * (a + b);
    adaptive_step(f, a, mid, 0.5 * tol, depth - 1) + adaptive_step(f, mid, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    adaptive_step(&f, a, b, tol, 40)
}

/// Caputo derivative of order `mu` at `t` from the derivative `dphi` of the
/// function, by quadrature of the weakly singular integral.
///
/// The substitution `s = (t - r)^{1 - mu}` removes the kernel singularity.
pub fn caputo_by_quadrature<F: Fn(f64) -> f64>(dphi: F, mu: f64, t: f64, tol: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if mu == 0.0 {
        return adaptive_integrate(dphi, 0.0, t, tol);
    }
    let p = 1.0 / (1.0 - mu);
    let upper = t.powf(1.0 - mu);
    let integral = adaptive_integrate(|s| dphi((t - s.powf(p)).max(0.0)) * p, 0.0, upper, tol);
    integral * reciprocal_gamma(1.0 - mu)
}

/// Spatial factor `X(x)` of a manufactured solution `t^2 X(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpatialShape {
    /// `sin(pi s)` with `s = (x - a) / (b - a)`
    Sine,
    /// `s^2 (1 - s)^2`
    Quartic,
}

impl SpatialShape {
    fn value(self, s: f64) -> f64 {
        match self {
            Self::Sine => (PI * s).sin(),
            Self::Quartic => s * s * (1.0 - s) * (1.0 - s),
        }
    }

    /// Second derivative with respect to `s`.
    fn second(self, s: f64) -> f64 {
        match self {
            Self::Sine => -PI * PI * (PI * s).sin(),
            Self::Quartic => 2.0 - 12.0 * s + 12.0 * s * s,
        }
    }
}

/// `Phi(x, t) = t^2 X(x)` together with the coefficients of the equation it
/// is manufactured for.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedSolution {
    pub shape: SpatialShape,
    pub a: f64,
    pub b: f64,
    pub rho: CoefficientFn,
    pub beta: CoefficientFn,
    pub nonlinearity: Nonlinearity,
    pub mu: MuProfile,
}

impl ManufacturedSolution {
    fn reference(&self, x: f64) -> f64 {
        (x - self.a) / (self.b - self.a)
    }

    pub fn exact(&self, x: f64, t: f64) -> f64 {
        t * t * self.shape.value(self.reference(x))
    }

    /// `g = Phi_tt + rho D^{mu(t)} Phi - beta Phi_xx - f(Phi)`.
    ///
    /// The Caputo term uses the order frozen at the evaluation time.
    pub fn source(&self, x: f64, t: f64) -> f64 {
        let s = self.reference(x);
        let len = self.b - self.a;
        let space = self.shape.value(s);
        let space_xx = self.shape.second(s) / (len * len);
        let mu = self.mu.eval(t.clamp(0.0, self.mu.horizon())).expect("clamped time lies in the profile range");
        let phi = t * t * space;
        2.0 * space + self.rho.eval(t) * caputo_t2(mu, t) * space - self.beta.eval(t) * t * t * space_xx
            - self.nonlinearity.eval(phi)
    }

    pub fn horizon(&self) -> f64 {
        self.mu.horizon()
    }

    /// The problem whose exact solution is `self` (zero initial data).
    pub fn problem_spec(&self) -> ProblemSpec {
        let ms = self.clone();
        ProblemSpec {
            a: self.a,
            b: self.b,
            horizon: self.horizon(),
            rho: self.rho,
            beta: self.beta,
            mu: self.mu.clone(),
            nonlinearity: self.nonlinearity,
            source: Some(Arc::new(move |x, t| ms.source(x, t))),
            phi0: InitialField::zero(),
            psi0: InitialField::zero(),
            clamp: None,
        }
    }
}

/// The manufactured benchmark problems on `[0, 1] x [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    /// `t^2 sin(pi x)`, `Phi (1 - Phi)`, oscillating order 0.2 -> 0.4.
    SineOscillating,
    /// `t^2 x^2 (1 - x)^2`, `Phi (1 + Phi)`, linear order 0.6 -> 0.4.
    QuarticLinear,
    /// As above with quadratic order 0.5 -> 0.8.
    QuarticQuadratic,
    /// As above with the sinusoidal order around 0.6.
    QuarticSinusoidal,
    /// `t^2 sin(pi x)`, `Phi (1 + Phi)`, damping `e^{-t}`, order 1/4 then 3/4.
    SinePiecewise,
}

impl Benchmark {
    pub const ALL: [Benchmark; 5] = [
        Self::SineOscillating,
        Self::QuarticLinear,
        Self::QuarticQuadratic,
        Self::QuarticSinusoidal,
        Self::SinePiecewise,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Self::SineOscillating => "ex1",
            Self::QuarticLinear => "ex2-i",
            Self::QuarticQuadratic => "ex2-ii",
            Self::QuarticSinusoidal => "ex2-iii",
            Self::SinePiecewise => "ex3",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.tag() == tag)
            .ok_or_else(|| Error::Config(format!("unknown benchmark `{tag}`")))
    }

    pub fn manufactured(self) -> ManufacturedSolution {
        let profile = match self {
            Self::SineOscillating => MuProfile::oscillating(0.2, 0.4, 1.0),
            Self::QuarticLinear => MuProfile::linear(0.6, 0.4, 1.0),
            Self::QuarticQuadratic => MuProfile::quadratic(0.5, 0.8, 1.0),
            Self::QuarticSinusoidal => MuProfile::sinusoidal(0.6, 0.8, 1.0),
            Self::SinePiecewise => MuProfile::piecewise_step(0.25, 0.75, 1.0),
        }
        .expect("benchmark profiles are valid");
        let (shape, nonlinearity, rho) = match self {
            Self::SineOscillating => (SpatialShape::Sine, Nonlinearity::LogisticMinus, CoefficientFn::Constant(1.0)),
            Self::SinePiecewise => (SpatialShape::Sine, Nonlinearity::LogisticPlus, CoefficientFn::ExpDecay(1.0)),
            _ => (SpatialShape::Quartic, Nonlinearity::LogisticPlus, CoefficientFn::Constant(1.0)),
        };
        ManufacturedSolution {
            shape,
            a: 0.0,
            b: 1.0,
            rho,
            beta: CoefficientFn::Constant(1.0),
            nonlinearity,
            mu: profile,
        }
    }
}

/// Truncated eigenfunction expansion of the homogeneous constant-order
/// problem `Phi_tt + D^mu Phi = Phi_xx` on `(0, L)`:
///
/// ```text
/// Phi(x, t) = sum_j X_j(x) [ (phi0, X_j) T1_j(t) + (psi0, X_j) T2_j(t) ],
/// X_j = sqrt(2 / L) sin(j pi x / L),   kappa_j = (j pi / L)^2.
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ModalSeries {
    mu: f64,
    length: f64,
    displacement: Vec<f64>,
    velocity: Vec<f64>,
    tail: f64,
}

const SERIES_QUADRATURE: usize = 128;

impl ModalSeries {
    pub fn new(modes: usize, mu: f64, length: f64, phi0: &InitialField, psi0: &InitialField) -> Result<Self> {
        if modes == 0 {
            return Err(Error::Domain("need at least one mode".into()));
        }
        if !(length > 0.0) {
            return Err(Error::Domain(format!("interval length must be positive, got {length}")));
        }
        if !(0.0..1.0).contains(&mu) {
            return Err(Error::Domain(format!("order must lie in [0, 1), got {mu}")));
        }
        let rule = gauss_rule(SERIES_QUADRATURE, 0.0, length)?;
        let coeff = |field: &InitialField, j: usize| {
            let k = j as f64 * PI / length;
            let norm = (2.0 / length).sqrt();
            rule.integrate(|x| field.value(x) * norm * (k * x).sin())
        };
        let displacement: Vec<f64> = (1..=modes).map(|j| coeff(phi0, j)).collect();
        let velocity: Vec<f64> = (1..=modes).map(|j| coeff(psi0, j)).collect();
        // coefficient mass of the next `modes` modes estimates what was dropped
        let tail = (modes + 1..=2 * modes)
            .map(|j| coeff(phi0, j).powi(2) + coeff(psi0, j).powi(2))
            .sum::<f64>()
            .sqrt();
        Ok(Self { mu, length, displacement, velocity, tail })
    }

    pub fn modes(&self) -> usize {
        self.displacement.len()
    }

    pub fn kappa(&self, j: usize) -> f64 {
        (j as f64 * PI / self.length).powi(2)
    }

    /// `L^2` size of the first dropped coefficients.
    pub fn tail_estimate(&self) -> f64 {
        self.tail
    }

    /// Mode amplitudes `(phi0, X_j) T1_j(t) + (psi0, X_j) T2_j(t)`, `j = 1..=K`.
    pub fn amplitudes(&self, t: f64) -> Result<Vec<f64>> {
        (1..=self.modes())
            .map(|j| {
                let kappa = self.kappa(j);
                let mut amp = 0.0;
                let c = self.displacement[j - 1];
                if c != 0.0 {
                    amp += c * mode_t1(kappa, self.mu, t)?;
                }
                let d = self.velocity[j - 1];
                if d != 0.0 {
                    amp += d * mode_t2(kappa, self.mu, t)?;
                }
                Ok(amp)
            })
            .collect()
    }

    pub fn eval_with(&self, amplitudes: &[f64], x: f64) -> f64 {
        let norm = (2.0 / self.length).sqrt();
        amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| a * norm * ((i + 1) as f64 * PI * x / self.length).sin())
            .sum()
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.eval_with(&self.amplitudes(t)?, x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_estimate: f64,
}

/// Point value of the `modes`-term series solution on `[0, length]`.
pub fn series_solution(
    modes: usize,
    mu: f64,
    length: f64,
    phi0: &InitialField,
    psi0: &InitialField,
    x: f64,
    t: f64,
) -> Result<SeriesValue> {
    let series = ModalSeries::new(modes, mu, length, phi0, psi0)?;
    Ok(SeriesValue { value: series.eval(x, t)?, tail_estimate: series.tail_estimate() })
}

/// Minimum Gauss order used for error norms.
const ERROR_QUADRATURE_MIN: usize = 32;

/// Gauss-quadrature `L^2` norm of `Phi^N - exact(., t)` for one coefficient vector.
pub struct ErrorNorm {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `values[k][r] = chi_r(x_k)`
    values: Vec<Vec<f64>>,
}

impl ErrorNorm {
    pub fn new(space: &SpectralSpace) -> Result<Self> {
        let basis = space.basis();
        let (a, b) = basis.domain();
        let order = space.rule().order().max(ERROR_QUADRATURE_MIN);
        let rule = gauss_rule(order, a, b)?;
        let values = rule.nodes().iter().map(|&x| basis.eval_all(x).0).collect();
        Ok(Self { nodes: rule.nodes().to_vec(), weights: rule.weights().to_vec(), values })
    }

    pub fn l2_error<F: Fn(f64) -> f64>(&self, coeffs: &[f64], exact: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((&x, &w), chi)| {
                let approx: f64 = chi.iter().zip(coeffs).map(|(c, u)| c * u).sum();
                w * (approx - exact(x)).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// `E = max_{1 <= i <= n} |Phi^N_i - Phi(t_i)|_{L^2}` with `t_i = i tau`.
pub fn max_l2_error<F: Fn(f64, f64) -> f64>(space: &SpectralSpace, state: &SpectralState, exact: F) -> Result<f64> {
    let norm = ErrorNorm::new(space)?;
    Ok((1..=state.step_index())
        .map(|i| {
            let t = state.time(i);
            norm.l2_error(state.u(i), |x| exact(x, t))
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre::Basis;
    use crate::special::gamma;

    #[test]
    fn caputo_t2_values() {
        assert_eq!(caputo_t2(0.0, 0.7), 0.7f64.powi(2) * 2.0 / 2.0);
        assert!((caputo_t2(0.5, 1.0) - 1.504_505_556_127_350_1).abs() < 1e-14);
        // mpmath quadrature of the defining integral
        assert!((caputo_t2(0.25, 0.5) - 0.369_695_696_977_552_97).abs() < 1e-14);
        assert_eq!(caputo_t2(0.3, 0.0), 0.0);
    }

    #[test]
    fn adaptive_integration() {
        let v = adaptive_integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1e-13);
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        let v = adaptive_integrate(|x: f64| (10.0 * x).sin(), 0.0, PI, 1e-13);
        assert!((v - (1.0 - (10.0 * PI).cos()) / 10.0).abs() < 1e-12);
    }

    #[test]
    fn caputo_quadrature_of_power() {
        // D^mu t^3 = 6 t^{3 - mu} / Gamma(4 - mu)
        for &mu in &[0.0, 0.3, 0.8] {
            let t: f64 = 0.9;
            let exact = 6.0 * t.powf(3.0 - mu) / gamma(4.0 - mu).unwrap();
            let v = caputo_by_quadrature(|r| 3.0 * r * r, mu, t, 1e-13);
            assert!((v - exact).abs() < 1e-11);
        }
    }

    #[test]
    fn source_at_initial_time_is_acceleration() {
        // every time factor vanishes except Phi_tt = 2 X(x)
        for bench in Benchmark::ALL {
            let ms = bench.manufactured();
            for &x in &[0.0, 0.3, 0.5, 1.0] {
                let expected = 2.0 * ms.exact(x, 1.0);
                assert!((ms.source(x, 0.0) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn quartic_source_terms() {
        // at x = 0 the space factor vanishes and only -beta t^2 X'' = -2 t^2 survives
        let ms = Benchmark::QuarticLinear.manufactured();
        assert!((ms.source(0.0, 1.0) + 2.0).abs() < 1e-14);
        // at t = 0 only Phi_tt = 2 X(x) remains
        assert!((ms.source(0.5, 0.0) - 2.0 * 0.0625).abs() < 1e-15);
    }

    #[test]
    fn sine_source_term_by_term() {
        let mut ms = Benchmark::SineOscillating.manufactured();
        ms.mu = MuProfile::constant(0.3, 1.0).unwrap();
        let expected = 2.0 + 1.294_761_653_557_253_8 + PI * PI - 0.0;
        // f(1) = 1 (1 - 1) = 0 at x = 0.5, t = 1
        assert!((ms.source(0.5, 1.0) - expected).abs() < 1e-12);
    }

    #[test]
    fn benchmark_tags_round_trip() {
        for b in Benchmark::ALL {
            assert_eq!(Benchmark::from_tag(b.tag()).unwrap(), b);
        }
        assert!(Benchmark::from_tag("ex4").is_err());
    }

    #[test]
    fn series_initial_values() {
        let phi0 = InitialField::sine(0.0, 1.0, 1);
        let zero = InitialField::zero();
        for &x in &[0.1, 0.5, 0.8] {
            let v = series_solution(3, 0.5, 1.0, &phi0, &zero, x, 0.0).unwrap();
            assert!((v.value - (PI * x).sin()).abs() < 1e-13);
            let v = series_solution(3, 0.5, 1.0, &zero, &phi0, x, 0.0).unwrap();
            assert_eq!(v.value, 0.0);
        }
        let v = series_solution(1, 0.5, 1.0, &phi0, &zero, 0.5, 0.25).unwrap();
        // mpmath inverse Laplace transform of the first mode
        assert!((v.value - 0.713_335_296_229_371_4).abs() < 1e-12);
        assert!(v.tail_estimate < 1e-12);
    }

    #[test]
    fn error_norm_of_constant_offset() {
        let space = SpectralSpace::new(Basis::new(8, 0.0, 1.0).unwrap()).unwrap();
        let norm = ErrorNorm::new(&space).unwrap();
        assert!((norm.l2_error(&[0.0; 7], |_| 0.25) - 0.25).abs() < 1e-14);
        let mut c = vec![0.0; 7];
        c[0] = 1.0;
        assert!(norm.l2_error(&c, |x| space.basis().chi(0, x).unwrap()) < 1e-14);
    }
}
