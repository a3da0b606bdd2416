//! Smooth bijections between the admissible parameter region and `R^n`, so
//! the unconstrained simplex search never leaves the parameter space.
//!
//! `alpha = 1 + 1/(1 + e^-u)`, `D = b tanh(v)`, `d = b tanh(w) - D` with
//! `b = 1 - 1/alpha`; each ARMA polynomial is parametrized by partial
//! autocorrelations `tanh(x_k)` mapped through the Durbin–Levinson recursion,
//! which keeps its roots outside the unit disk.

use crate::error::{Error, Result};
use crate::model::{ArfismaParams, SeasonalSpec};

/// How the tail index enters the transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaMode {
    /// `alpha` is the first unconstrained coordinate.
    Free,
    /// `alpha` is held at this value and only sets the memory bound.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamTransform {
    pub spec: SeasonalSpec,
    pub alpha: AlphaMode,
}

// keeps the inverse finite at alpha = 2 and on boundaries hit in rounding
const EDGE: f64 = 1e-12;

fn logistic(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

fn atanh_checked(x: f64, what: &str) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::InvalidArgument(format!("{what} = {x} outside the open unit interval")));
    }
    Ok(x.atanh())
}

/// Partial autocorrelations to the coefficients `a` of `1 - a_1 z - ... - a_k z^k`.
pub fn pacf_to_ar(r: &[f64]) -> Vec<f64> {
    let mut a: Vec<f64> = Vec::with_capacity(r.len());
    for (k, &rk) in r.iter().enumerate() {
        let prev = a.clone();
        for j in 0..k {
            a[j] = prev[j] - rk * prev[k - 1 - j];
        }
        a.push(rk);
    }
    a
}

/// Inverse of [`pacf_to_ar`]; errors if the polynomial is not stable.
pub fn ar_to_pacf(a: &[f64]) -> Result<Vec<f64>> {
    let mut cur = a.to_vec();
    let mut r = vec![0.0; a.len()];
    for k in (0..a.len()).rev() {
        let rk = cur[k];
        if !(rk.abs() < 1.0) {
            return Err(Error::InvalidArgument(format!("polynomial {a:?} has a root inside the unit disk")));
        }
        r[k] = rk;
        let denom = 1.0 - rk * rk;
        let prev: Vec<f64> = (0..k).map(|j| (cur[j] + rk * cur[k - 1 - j]) / denom).collect();
        cur = prev;
    }
    Ok(r)
}

impl ParamTransform {
    pub fn new(spec: SeasonalSpec, alpha: AlphaMode) -> Self {
        ParamTransform { spec, alpha }
    }

    /// Number of unconstrained coordinates.
    pub fn dim(&self) -> usize {
        let base = match self.alpha {
            AlphaMode::Free => 3,
            AlphaMode::Fixed(_) => 2,
        };
        base + self.spec.arma_len()
    }

    pub fn to_params(&self, u: &[f64]) -> ArfismaParams {
        assert_eq!(u.len(), self.dim(), "coordinate count");
        let (alpha, rest) = match self.alpha {
            AlphaMode::Free => (1.0 + logistic(u[0]), &u[1..]),
            AlphaMode::Fixed(a) => (a, u),
        };
        let bound = 1.0 - 1.0 / alpha;
        let d_seasonal = bound * rest[0].tanh();
        let d = bound * rest[1].tanh() - d_seasonal;
        let mut cursor = &rest[2..];
        let mut group = |n: usize, sign: f64| {
            let (x, tail) = cursor.split_at(n);
            cursor = tail;
            let r: Vec<f64> = x.iter().map(|v| v.tanh()).collect();
            pacf_to_ar(&r).into_iter().map(|c| sign * c).collect::<Vec<_>>()
        };
        let phi = group(self.spec.p, 1.0);
        let theta = group(self.spec.q, -1.0);
        let phi_seasonal = group(self.spec.seasonal_p, 1.0);
        let theta_seasonal = group(self.spec.seasonal_q, -1.0);
        ArfismaParams { alpha, d, d_seasonal, phi, theta, phi_seasonal, theta_seasonal }
    }

    /// Unconstrained coordinates of `psi`; errors if `psi` is outside the
    /// region the transform covers.
    pub fn from_params(&self, psi: &ArfismaParams) -> Result<Vec<f64>> {
        if psi.spec(self.spec.s) != self.spec {
            return Err(Error::InvalidArgument("parameter orders do not match the spec".into()));
        }
        let mut u = Vec::with_capacity(self.dim());
        let alpha = match self.alpha {
            AlphaMode::Free => {
                if !(psi.alpha > 1.0 && psi.alpha <= 2.0) {
                    return Err(Error::AlphaOutOfRange(psi.alpha));
                }
                let a = psi.alpha.min(2.0 - EDGE);
                u.push(((a - 1.0) / (2.0 - a)).ln());
                psi.alpha
            }
            AlphaMode::Fixed(a) => a,
        };
        let bound = 1.0 - 1.0 / alpha;
        u.push(atanh_checked(psi.d_seasonal / bound, "D / (1 - 1/alpha)")?);
        u.push(atanh_checked((psi.d + psi.d_seasonal) / bound, "(d + D) / (1 - 1/alpha)")?);
        for (coeffs, sign) in [(&psi.phi, 1.0), (&psi.theta, -1.0), (&psi.phi_seasonal, 1.0), (&psi.theta_seasonal, -1.0)] {
            let a: Vec<f64> = coeffs.iter().map(|c| sign * c).collect();
            for r in ar_to_pacf(&a)? {
                u.push(atanh_checked(r, "partial autocorrelation")?);
            }
        }
        Ok(u)
    }
}
