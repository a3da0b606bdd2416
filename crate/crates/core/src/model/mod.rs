//! ARFISMA(p, d, q) x (P, D, Q)_s coefficient algebra: parameter validation,
//! Gegenbauer and seasonal memory expansions, MA(inf)/AR(inf) weights and the
//! power transfer function.

mod coeffs;
mod roots;
mod transfer;

pub use coeffs::{
    ar_coeffs, gegenbauer, ma_coeffs, memory_factors, seasonal_memory_coeffs, seasonal_memory_coeffs_factored,
    series_div, series_mul, MemorySign,
};
pub(crate) use coeffs::{ar_coeffs_unchecked, ma_coeffs_unchecked};
pub use roots::polynomial_roots;
pub use transfer::{power_transfer, TransferFunction};

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seasonal period and ARMA orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeasonalSpec {
    pub s: usize,
    pub p: usize,
    pub q: usize,
    #[serde(rename = "P")]
    pub seasonal_p: usize,
    #[serde(rename = "Q")]
    pub seasonal_q: usize,
}

impl SeasonalSpec {
    pub fn new(s: usize, p: usize, q: usize, seasonal_p: usize, seasonal_q: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("seasonal period must be at least 1".into()));
        }
        Ok(SeasonalSpec { s, p, q, seasonal_p, seasonal_q })
    }

    /// Pure seasonal fractional noise with period `s`.
    pub fn memory_only(s: usize) -> Self {
        SeasonalSpec { s, p: 0, q: 0, seasonal_p: 0, seasonal_q: 0 }
    }

    /// Number of ARMA coefficients.
    pub fn arma_len(&self) -> usize {
        self.p + self.q + self.seasonal_p + self.seasonal_q
    }

    /// Length of the full parameter vector `(alpha, d, D, arma...)`.
    pub fn param_len(&self) -> usize {
        3 + self.arma_len()
    }

    /// Coordinate names in vector order.
    pub fn param_names(&self) -> Vec<String> {
        let mut names = vec!["alpha".to_string(), "d".to_string(), "D".to_string()];
        names.extend((1..=self.p).map(|i| format!("phi{i}")));
        names.extend((1..=self.q).map(|i| format!("theta{i}")));
        names.extend((1..=self.seasonal_p).map(|i| format!("Phi{i}")));
        names.extend((1..=self.seasonal_q).map(|i| format!("Theta{i}")));
        names
    }
}

/// The parameter vector `psi = (alpha, d, D, phi, theta, Phi, Theta)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArfismaParams {
    pub alpha: f64,
    pub d: f64,
    #[serde(rename = "D")]
    pub d_seasonal: f64,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    #[serde(rename = "Phi")]
    pub phi_seasonal: Vec<f64>,
    #[serde(rename = "Theta")]
    pub theta_seasonal: Vec<f64>,
}

impl ArfismaParams {
    /// Fractional noise without ARMA terms.
    pub fn memory_only(alpha: f64, d: f64, d_seasonal: f64) -> Self {
        ArfismaParams { alpha, d, d_seasonal, phi: vec![], theta: vec![], phi_seasonal: vec![], theta_seasonal: vec![] }
    }

    pub fn with_arma(mut self, phi: Vec<f64>, theta: Vec<f64>) -> Self {
        self.phi = phi;
        self.theta = theta;
        self
    }

    pub fn with_seasonal_arma(mut self, phi_seasonal: Vec<f64>, theta_seasonal: Vec<f64>) -> Self {
        self.phi_seasonal = phi_seasonal;
        self.theta_seasonal = theta_seasonal;
        self
    }

    /// The orders implied by the coefficient vectors.
    pub fn spec(&self, s: usize) -> SeasonalSpec {
        SeasonalSpec {
            s,
            p: self.phi.len(),
            q: self.theta.len(),
            seasonal_p: self.phi_seasonal.len(),
            seasonal_q: self.theta_seasonal.len(),
        }
    }

    /// Flattens to `(alpha, d, D, phi.., theta.., Phi.., Theta..)`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![self.alpha, self.d, self.d_seasonal];
        v.extend(&self.phi);
        v.extend(&self.theta);
        v.extend(&self.phi_seasonal);
        v.extend(&self.theta_seasonal);
        v
    }

    /// Inverse of [`ArfismaParams::to_vec`] for the orders in `spec`.
    pub fn from_vec(v: &[f64], spec: &SeasonalSpec) -> Result<Self> {
        if v.len() != spec.param_len() {
            return Err(Error::InvalidArgument(format!(
                "parameter vector has {} entries, spec needs {}",
                v.len(),
                spec.param_len()
            )));
        }
        let mut rest = &v[3..];
        let mut take = |n: usize| {
            let (a, b) = rest.split_at(n);
            rest = b;
            a.to_vec()
        };
        Ok(ArfismaParams {
            alpha: v[0],
            d: v[1],
            d_seasonal: v[2],
            phi: take(spec.p),
            theta: take(spec.q),
            phi_seasonal: take(spec.seasonal_p),
            theta_seasonal: take(spec.seasonal_q),
        })
    }

    /// `phi(z) Phi(z^s)` as coefficients of `1, z, z^2, ...`.
    pub fn ar_polynomial(&self, s: usize) -> Vec<f64> {
        let nonseasonal = sign_poly(&self.phi, -1.0, 1);
        let seasonal = sign_poly(&self.phi_seasonal, -1.0, s);
        poly_mul(&nonseasonal, &seasonal)
    }

    /// `theta(z) Theta(z^s)` as coefficients of `1, z, z^2, ...`.
    pub fn ma_polynomial(&self, s: usize) -> Vec<f64> {
        let nonseasonal = sign_poly(&self.theta, 1.0, 1);
        let seasonal = sign_poly(&self.theta_seasonal, 1.0, s);
        poly_mul(&nonseasonal, &seasonal)
    }
}

impl fmt::Display for ArfismaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} d={} D={}", self.alpha, self.d, self.d_seasonal)?;
        for (name, v) in [("phi", &self.phi), ("theta", &self.theta), ("Phi", &self.phi_seasonal), ("Theta", &self.theta_seasonal)] {
            if !v.is_empty() {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, " {name}=[{}]", parts.join(","))?;
            }
        }
        Ok(())
    }
}

/// `1 + sign * (c_1 z^step + c_2 z^(2 step) + ...)`.
fn sign_poly(c: &[f64], sign: f64, step: usize) -> Vec<f64> {
    let mut p = vec![0.0; c.len() * step + 1];
    p[0] = 1.0;
    for (i, &v) in c.iter().enumerate() {
        p[(i + 1) * step] = sign * v;
    }
    p
}

pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// A truncated coefficient sequence indexed `0..=J`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    values: Vec<f64>,
}

impl CoefficientSeries {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "a coefficient series has at least one term");
        CoefficientSeries { values }
    }

    /// The truncation index `J` (the series holds `J + 1` values).
    pub fn truncation(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }
}

impl std::ops::Deref for CoefficientSeries {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.values
    }
}

/// Tolerances used by [`validate_params_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationSettings {
    /// Roots must satisfy `|z| > 1 + root_margin`.
    pub root_margin: f64,
    /// AR and MA roots closer than this count as a common zero.
    pub common_zero_tol: f64,
    /// Tail index used in the memory bounds `|d + D|, |D| < 1 - 1/alpha`.
    /// `None` uses `psi.alpha`.
    pub memory_alpha: Option<f64>,
}

impl Default for ValidationSettings {
    fn default() -> Self {
        ValidationSettings { root_margin: 1e-6, common_zero_tol: 1e-6, memory_alpha: None }
    }
}

/// One violated condition of the parameter space.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite,
    OrderMismatch { expected: SeasonalSpec },
    AlphaRange(f64),
    MemorySum { value: f64, bound: f64 },
    SeasonalMemory { value: f64, bound: f64 },
    ArRoots { min_modulus: f64 },
    MaRoots { min_modulus: f64 },
    CommonZeros { distance: f64 },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::NonFinite => "finite",
            Violation::OrderMismatch { .. } => "orders",
            Violation::AlphaRange(_) => "1 < alpha <= 2",
            Violation::MemorySum { .. } => "|d + D| < 1 - 1/alpha",
            Violation::SeasonalMemory { .. } => "|D| < 1 - 1/alpha",
            Violation::ArRoots { .. } => "AR roots outside the unit disk",
            Violation::MaRoots { .. } => "MA roots outside the unit disk",
            Violation::CommonZeros { .. } => "no common AR/MA zeros",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite => write!(f, "{}: a coefficient is not finite", self.name()),
            Violation::OrderMismatch { expected } => write!(
                f,
                "{}: expected p={} q={} P={} Q={}",
                self.name(),
                expected.p,
                expected.q,
                expected.seasonal_p,
                expected.seasonal_q
            ),
            Violation::AlphaRange(a) => write!(f, "{} fails (alpha = {a})", self.name()),
            Violation::MemorySum { value, bound } | Violation::SeasonalMemory { value, bound } => {
                write!(f, "{} fails ({value} >= {bound})", self.name())
            }
            Violation::ArRoots { min_modulus } | Violation::MaRoots { min_modulus } => {
                write!(f, "{} fails (smallest root modulus {min_modulus})", self.name())
            }
            Violation::CommonZeros { distance } => write!(f, "{} fails (roots {distance:e} apart)", self.name()),
        }
    }
}

/// Outcome of [`validate_params`]: every violated condition, empty when
/// valid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Validity {
    pub violations: Vec<Violation>,
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidParams(self.violations.iter().map(|v| v.to_string()).collect()))
        }
    }
}

/// Checks `psi` against the parameter space with default tolerances.
pub fn validate_params(psi: &ArfismaParams, spec: &SeasonalSpec) -> Validity {
    validate_params_with(psi, spec, &ValidationSettings::default())
}

pub fn validate_params_with(psi: &ArfismaParams, spec: &SeasonalSpec, settings: &ValidationSettings) -> Validity {
    let mut out = Validity::default();
    if psi.to_vec().iter().any(|v| !v.is_finite()) {
        out.violations.push(Violation::NonFinite);
        return out;
    }
    if psi.spec(spec.s) != *spec {
        out.violations.push(Violation::OrderMismatch { expected: *spec });
    }
    if !(psi.alpha > 1.0 && psi.alpha <= 2.0) {
        out.violations.push(Violation::AlphaRange(psi.alpha));
    }
    let alpha = settings.memory_alpha.unwrap_or(psi.alpha);
    if alpha > 1.0 {
        let bound = 1.0 - 1.0 / alpha;
        let sum = (psi.d + psi.d_seasonal).abs();
        if !(sum < bound) {
            out.violations.push(Violation::MemorySum { value: sum, bound });
        }
        if !(psi.d_seasonal.abs() < bound) {
            out.violations.push(Violation::SeasonalMemory { value: psi.d_seasonal.abs(), bound });
        }
    }
    let ar_roots = polynomial_roots(&psi.ar_polynomial(spec.s));
    let ma_roots = polynomial_roots(&psi.ma_polynomial(spec.s));
    let limit = 1.0 + settings.root_margin;
    let min_mod = |r: &[Complex64]| r.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if min_mod(&ar_roots) <= limit {
        out.violations.push(Violation::ArRoots { min_modulus: min_mod(&ar_roots) });
    }
    if min_mod(&ma_roots) <= limit {
        out.violations.push(Violation::MaRoots { min_modulus: min_mod(&ma_roots) });
    }
    let closest = ar_roots
        .iter()
        .flat_map(|a| ma_roots.iter().map(move |b| (a - b).norm()))
        .fold(f64::INFINITY, f64::min);
    if closest < settings.common_zero_tol {
        out.violations.push(Violation::CommonZeros { distance: closest });
    }
    out
}

/// The four data generating processes of the Monte Carlo study (s = 4).
pub fn table1_model(index: usize) -> Result<(ArfismaParams, SeasonalSpec)> {
    let base = ArfismaParams::memory_only(1.6, 0.15, 0.20);
    let psi = match index {
        1 => base,
        2 => base.with_arma(vec![0.6], vec![]),
        3 => base.with_arma(vec![], vec![0.4]),
        4 => base.with_arma(vec![0.6], vec![0.4]),
        _ => return Err(Error::InvalidArgument(format!("model preset {index} is not one of 1-4"))),
    };
    let spec = psi.spec(4);
    Ok((psi, spec))
}
