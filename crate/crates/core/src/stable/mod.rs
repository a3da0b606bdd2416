//! Stable-law primitives: characteristic function, symmetric standard
//! density, Chambers–Mallows–Stuck sampling and maximum-likelihood
//! estimation of the tail index.

mod density;
mod mle;
mod sampler;

pub use density::{sas_density, QuadratureSettings, SasDensity};
pub use mle::{
    alpha_log_likelihood, alpha_log_likelihood_clamped, fit_alpha_mle, AlphaFit, ALPHA_SEARCH_LOWER, DENSITY_FLOOR,
};
pub use sampler::{sample_sas, sample_sas_from};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Parameters `(alpha, beta, sigma, mu)` of a stable law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub mu: f64,
}

impl StableParams {
    pub fn new(alpha: f64, beta: f64, sigma: f64, mu: f64) -> Result<Self> {
        let p = StableParams { alpha, beta, sigma, mu };
        p.validate()?;
        Ok(p)
    }

    /// Symmetric standard law: `beta = 0`, `sigma = 1`, `mu = 0`.
    pub fn symmetric(alpha: f64) -> Result<Self> {
        Self::new(alpha, 0.0, 1.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::InvalidStableParams(format!("alpha = {} not in (0, 2]", self.alpha)));
        }
        if !(-1.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidStableParams(format!("beta = {} not in [-1, 1]", self.beta)));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidStableParams(format!("sigma = {} not positive", self.sigma)));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidStableParams(format!("mu = {} not finite", self.mu)));
        }
        Ok(())
    }
}

/// Characteristic function of `S_alpha,beta(mu, sigma)` at `t`, both the
/// `alpha != 1` and the `alpha = 1` branch.
pub fn stable_cf(params: &StableParams, t: f64) -> Complex64 {
    let StableParams { alpha, beta, sigma, mu } = *params;
    if t == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let sign = t.signum();
    let at = t.abs();
    let exponent = if alpha != 1.0 {
        let scale = (sigma * at).powf(alpha);
        Complex64::new(-scale, mu * t + scale * beta * sign * (PI * alpha / 2.0).tan())
    } else {
        let scale = sigma * at;
        Complex64::new(-scale, mu * t - scale * beta * (2.0 / PI) * sign * at.ln())
    };
    exponent.exp()
}
