use std::f64::consts::PI;

use num_complex::Complex64;

use super::{validate_params_with, ArfismaParams, SeasonalSpec, ValidationSettings};
use crate::error::{Error, Result};

/// Power transfer function
/// `h(lambda) = |theta Theta / phi Phi|^2 |2 sin(lambda/2)|^(-2d) |2 sin(lambda s/2)|^(-2D)`
/// for a validated parameter set.
#[derive(Debug, Clone)]
pub struct TransferFunction {
    ar: Vec<f64>,
    ma: Vec<f64>,
    d: f64,
    d_seasonal: f64,
    s: usize,
}

/// Frequencies within this distance (in units of the period) of a zero of
/// `sin` count as singular.
const SINGULAR_TOL: f64 = 1e-12;

fn on_grid(x: f64) -> bool {
    (x - x.round()).abs() < SINGULAR_TOL
}

fn poly_at(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

impl TransferFunction {
    pub fn new(psi: &ArfismaParams, spec: &SeasonalSpec) -> Result<Self> {
        Self::with_settings(psi, spec, &ValidationSettings::default())
    }

    pub fn with_settings(psi: &ArfismaParams, spec: &SeasonalSpec, settings: &ValidationSettings) -> Result<Self> {
        validate_params_with(psi, spec, settings).into_result()?;
        Ok(TransferFunction {
            ar: psi.ar_polynomial(spec.s),
            ma: psi.ma_polynomial(spec.s),
            d: psi.d,
            d_seasonal: psi.d_seasonal,
            s: spec.s,
        })
    }

    /// `h(lambda)` for `lambda` in `[-pi, pi]`.
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        if !(lambda.abs() <= PI) {
            return Err(Error::InvalidArgument(format!("frequency {lambda} outside [-pi, pi]")));
        }
        let nonseasonal_zero = on_grid(lambda / (2.0 * PI));
        let seasonal_zero = on_grid(lambda * self.s as f64 / (2.0 * PI));
        if (nonseasonal_zero && self.d > 0.0) || (seasonal_zero && self.d_seasonal > 0.0) {
            return Err(Error::SingularFrequency(lambda));
        }
        let z = Complex64::from_polar(1.0, -lambda);
        let ratio = poly_at(&self.ma, z).norm_sqr() / poly_at(&self.ar, z).norm_sqr();
        let memory = |exponent: f64, x: f64, zero: bool| {
            if exponent == 0.0 {
                1.0
            } else if zero {
                0.0
            } else {
                (2.0 * (x / 2.0).sin()).abs().powf(-2.0 * exponent)
            }
        };
        Ok(ratio
            * memory(self.d, lambda, nonseasonal_zero)
            * memory(self.d_seasonal, lambda * self.s as f64, seasonal_zero))
    }
}

/// One-shot evaluation of the power transfer function.
pub fn power_transfer(psi: &ArfismaParams, spec: &SeasonalSpec, lambda: f64) -> Result<f64> {
    TransferFunction::new(psi, spec)?.eval(lambda)
}
