//! Solver for the one-dimensional nonlinear wave equation with a
//! time-dependent variable-order Caputo damping term,
//!
//! ```text
//! Phi_tt + rho(t) D^{mu(t)} Phi = (beta(t) Phi_x)_x + f(Phi) + Q(x, t),
//! ```
//!
//! discretised by backward differences and an L1-type convolution
//! quadrature in time (Rothe's method) and a boundary-adapted
//! Legendre-Galerkin method in space.

pub mod caputo;
pub mod error;
pub mod galerkin;
pub mod harness;
pub mod legendre;
pub mod linalg;
pub mod oracle;
pub mod profiles;
pub mod special;
pub mod stepper;

pub use error::{Error, Result};
pub use profiles::{CoefficientFn, MuProfile};
pub use stepper::{InitialField, Nonlinearity, ProblemSpec, Solver, SpectralState};
