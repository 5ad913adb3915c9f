//! Discrete variable-order Caputo operator on a uniform grid `t_q = q tau`.
//!
//! At step `k` the order is frozen at `mu_k = mu(t_k)` and
//!
//! ```text
//! D Phi_k = sum_{q=1}^k a_q (Phi_q - Phi_{q-1}) = sum_{q=0}^k b_q Phi_q,
//! a_q = (t_k - t_{q-1})^{-mu_k} / Gamma(1 - mu_k),
//! b_0 = -a_1,  b_q = a_q - a_{q+1},  b_k = a_k.
//! ```

use crate::error::{Error, Result};
use crate::profiles::MuProfile;
use crate::special::reciprocal_gamma;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelWeights {
    k: usize,
    mu: f64,
    tau: f64,
    /// `a[q - 1] = a_q` for `q = 1..=k`.
    a: Vec<f64>,
    /// `b[q] = b_q` for `q = 0..=k`.
    b: Vec<f64>,
}

impl KernelWeights {
    /// Weights for step `k` at a given frozen order.
    pub fn with_order(k: usize, tau: f64, mu: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("step index must be at least 1".into()));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("step size must be positive, got {tau}")));
        }
        if !(0.0..1.0).contains(&mu) {
            return Err(Error::Domain(format!("order must lie in [0, 1), got {mu}")));
        }
        let scale = reciprocal_gamma(1.0 - mu);
        // t_k - t_{q-1} = (k - q + 1) tau
        let a: Vec<f64> = (1..=k).map(|q| ((k - q + 1) as f64 * tau).powf(-mu) * scale).collect();
        let mut b = Vec::with_capacity(k + 1);
        b.push(-a[0]);
        b.extend(a.windows(2).map(|w| w[0] - w[1]));
        b.push(a[k - 1]);
        Ok(Self { k, mu, tau, a, b })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `a_1 ..= a_k`.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// `b_0 ..= b_k`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `b_k = tau^{-mu_k} / Gamma(1 - mu_k)`, the implicit coefficient.
    pub fn leading(&self) -> f64 {
        self.b[self.k]
    }

    /// `sum_q b_q Phi_q` for scalar samples `Phi_0 ..= Phi_k`.
    pub fn apply_history(&self, values: &[f64]) -> Result<f64> {
        self.check_len(values.len())?;
        Ok(self.b.iter().zip(values).map(|(b, v)| b * v).sum())
    }

    /// Entrywise `sum_q b_q Phi_q` for vector samples.
    pub fn apply_history_vec<V: AsRef<[f64]>>(&self, values: &[V]) -> Result<Vec<f64>> {
        self.check_len(values.len())?;
        let dim = values[0].as_ref().len();
        let mut out = vec![0.0; dim];
        for (b, v) in self.b.iter().zip(values) {
            let v = v.as_ref();
            if v.len() != dim {
                return Err(Error::LengthMismatch { expected: dim, got: v.len() });
            }
            for (o, x) in out.iter_mut().zip(v) {
                *o += b * x;
            }
        }
        Ok(out)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.k + 1 {
            return Err(Error::LengthMismatch { expected: self.k + 1, got: len });
        }
        Ok(())
    }
}

/// Weights for step `k` with the order sampled from `profile` at `t_k = k tau`.
pub fn weights(k: usize, tau: f64, profile: &MuProfile) -> Result<KernelWeights> {
    let mu = profile.eval(k as f64 * tau)?;
    KernelWeights::with_order(k, tau, mu)
}
