use std::f64::consts::PI;

use super::{validate_params, ArfismaParams, CoefficientSeries, SeasonalSpec};
use crate::error::{Error, Result};

/// Which side of the seasonal long-memory operator to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemorySign {
    /// `prod_i (1 - 2 nu_i z + z^2)^(-d_i)`: the weights `b_j` of the MA side.
    Inverse,
    /// `prod_i (1 - 2 nu_i z + z^2)^(d_i)`: the weights `pi_j = b_j(-d)`.
    Operator,
}

impl MemorySign {
    fn factor(self) -> f64 {
        match self {
            MemorySign::Inverse => 1.0,
            MemorySign::Operator => -1.0,
        }
    }
}

/// Coefficients `C_0..C_J` of `(1 - 2 nu z + z^2)^(-d)` by the three-term
/// Gegenbauer recursion.
pub fn gegenbauer(d: f64, nu: f64, j_max: usize) -> CoefficientSeries {
    let mut c = vec![0.0; j_max + 1];
    c[0] = 1.0;
    if j_max >= 1 {
        c[1] = 2.0 * d * nu;
    }
    for j in 2..=j_max {
        let jf = j as f64;
        c[j] = 2.0 * nu * ((d - 1.0) / jf + 1.0) * c[j - 1] - (2.0 * (d - 1.0) / jf + 1.0) * c[j - 2];
    }
    CoefficientSeries::new(c)
}

/// Exponents and frequencies `(d_i, nu_i)`, `i = 0..=floor(s/2)`, of the
/// factorization `(1-B)^d (1-B^s)^D = prod_i (1 - 2 nu_i B + B^2)^(d_i)`,
/// `nu_i = cos(2 pi i / s)`. For even `s` the factor at `nu = -1` carries
/// `D/2`; for odd `s` there is no such factor and every harmonic carries `D`.
pub fn memory_factors(d: f64, d_seasonal: f64, s: usize) -> Vec<(f64, f64)> {
    let half = s / 2;
    (0..=half)
        .map(|i| {
            let nu = if i == 0 { 1.0 } else { (2.0 * PI * i as f64 / s as f64).cos() };
            let di = if i == 0 {
                (d + d_seasonal) / 2.0
            } else if s.is_multiple_of(2) && i == half {
                d_seasonal / 2.0
            } else {
                d_seasonal
            };
            (di, nu)
        })
        .collect()
}

/// Truncated product of two power series up to `z^j_max`.
pub fn series_mul(a: &[f64], b: &[f64], j_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; j_max + 1];
    for (i, &x) in a.iter().enumerate().take(j_max + 1) {
        if x == 0.0 {
            continue;
        }
        let n = (j_max + 1 - i).min(b.len());
        for (o, &y) in out[i..i + n].iter_mut().zip(&b[..n]) {
            *o += x * y;
        }
    }
    out
}

/// Solves `den * q = num` for the power series `q` up to `z^j_max`
/// (synthetic division; `den[0]` must be 1).
pub fn series_div(num: &[f64], den: &[f64], j_max: usize) -> Vec<f64> {
    debug_assert!(den[0] == 1.0);
    let mut q = vec![0.0; j_max + 1];
    for j in 0..=j_max {
        let mut v = num.get(j).copied().unwrap_or(0.0);
        for k in 1..den.len().min(j + 1) {
            v -= den[k] * q[j - k];
        }
        q[j] = v;
    }
    q
}

/// Seasonal long-memory weights by iterated truncated convolution of the
/// Gegenbauer series of each factor: `b_j` for [`MemorySign::Inverse`],
/// `pi_j` for [`MemorySign::Operator`].
pub fn seasonal_memory_coeffs(
    d: f64,
    d_seasonal: f64,
    s: usize,
    j_max: usize,
    sign: MemorySign,
) -> Result<CoefficientSeries> {
    if s == 0 {
        return Err(Error::InvalidArgument("seasonal period must be at least 1".into()));
    }
    let mut acc = vec![0.0; j_max + 1];
    acc[0] = 1.0;
    for (di, nu) in memory_factors(d, d_seasonal, s) {
        let g = gegenbauer(sign.factor() * di, nu, j_max);
        acc = series_mul(&g, &acc, j_max);
    }
    Ok(CoefficientSeries::new(acc))
}

/// Coefficients of `(1 - z)^(-delta)`.
fn binomial_series(delta: f64, j_max: usize) -> Vec<f64> {
    let mut w = vec![0.0; j_max + 1];
    w[0] = 1.0;
    for k in 1..=j_max {
        w[k] = w[k - 1] * ((k - 1) as f64 + delta) / k as f64;
    }
    w
}

/// The same weights as [`seasonal_memory_coeffs`] computed from the collapsed
/// form `(1 - z)^(-d) (1 - z^s)^(-D)`: the seasonal factor is nonzero only at
/// multiples of `s`, so the convolution costs `O(J^2 / s)`.
pub fn seasonal_memory_coeffs_factored(
    d: f64,
    d_seasonal: f64,
    s: usize,
    j_max: usize,
    sign: MemorySign,
) -> Result<CoefficientSeries> {
    if s == 0 {
        return Err(Error::InvalidArgument("seasonal period must be at least 1".into()));
    }
    let f = sign.factor();
    let nonseasonal = binomial_series(f * d, j_max);
    let seasonal = binomial_series(f * d_seasonal, j_max / s);
    let mut out = vec![0.0; j_max + 1];
    for (k, &w) in seasonal.iter().enumerate() {
        let shift = k * s;
        for (o, &x) in out[shift..].iter_mut().zip(&nonseasonal) {
            *o += w * x;
        }
    }
    Ok(CoefficientSeries::new(out))
}

/// MA(inf) weights `c_0..c_J`: `Theta(z^s) theta(z) b(z) = Phi(z^s) phi(z) c(z)`.
pub fn ma_coeffs(psi: &ArfismaParams, spec: &SeasonalSpec, j_max: usize) -> Result<CoefficientSeries> {
    validate_params(psi, spec).into_result()?;
    Ok(ma_coeffs_unchecked(psi, spec.s, j_max))
}

/// AR(inf) weights `c~_0..c~_J`: `Phi(z^s) phi(z) pi(z) = Theta(z^s) theta(z) c~(z)`.
pub fn ar_coeffs(psi: &ArfismaParams, spec: &SeasonalSpec, j_max: usize) -> Result<CoefficientSeries> {
    validate_params(psi, spec).into_result()?;
    Ok(ar_coeffs_unchecked(psi, spec.s, j_max))
}

pub(crate) fn ma_coeffs_unchecked(psi: &ArfismaParams, s: usize, j_max: usize) -> CoefficientSeries {
    let b = seasonal_memory_coeffs_factored(psi.d, psi.d_seasonal, s, j_max, MemorySign::Inverse)
        .expect("period checked by the caller");
    let num = series_mul(&psi.ma_polynomial(s), &b, j_max);
    CoefficientSeries::new(series_div(&num, &psi.ar_polynomial(s), j_max))
}

pub(crate) fn ar_coeffs_unchecked(psi: &ArfismaParams, s: usize, j_max: usize) -> CoefficientSeries {
    let pi = seasonal_memory_coeffs_factored(psi.d, psi.d_seasonal, s, j_max, MemorySign::Operator)
        .expect("period checked by the caller");
    let num = series_mul(&psi.ar_polynomial(s), &pi, j_max);
    CoefficientSeries::new(series_div(&num, &psi.ma_polynomial(s), j_max))
}
