use std::f64::consts::PI;

use super::periodogram::Periodogram;
use crate::error::{Error, Result};
use crate::model::{ArfismaParams, SeasonalSpec, TransferFunction, ValidationSettings};

/// Validation used for the memory/ARMA slice: the memory bounds are those of
/// `alpha = 2`, i.e. `|d + D|, |D| < 1/2`.
pub fn zeta_settings() -> ValidationSettings {
    ValidationSettings { memory_alpha: Some(2.0), ..Default::default() }
}

/// `L_W = (1/N) sum_j 1 / h(lambda_j; zeta)`; `zeta.alpha` is ignored.
pub fn whittle_objective(freqs: &[f64], zeta: &ArfismaParams, spec: &SeasonalSpec) -> Result<f64> {
    if freqs.is_empty() {
        return Err(Error::InvalidArgument("no frequencies".into()));
    }
    let zeta = ArfismaParams { alpha: 2.0, ..zeta.clone() };
    let h = TransferFunction::with_settings(&zeta, spec, &zeta_settings())?;
    let mut total = 0.0;
    for &l in freqs {
        total += 1.0 / h.eval(l)?;
    }
    Ok(total / freqs.len() as f64)
}

/// Weighted Whittle average `sum_j w_j / h(lambda_j) / sum_j w_j` with the
/// frequency-dependent parts tabulated once, for repeated evaluation.
#[derive(Debug, Clone)]
pub struct WhittleObjective {
    spec: SeasonalSpec,
    weights: Vec<f64>,
    weight_sum: f64,
    log_sin: Vec<f64>,
    log_sin_seasonal: Vec<f64>,
    // cos(k lambda_j), sin(k lambda_j) for k = 0..=degree, row-major by j
    cos: Vec<f64>,
    sin: Vec<f64>,
    degree: usize,
}

impl WhittleObjective {
    /// Equal weights, e.g. for Metropolis–Hastings draws.
    pub fn new(freqs: &[f64], spec: &SeasonalSpec) -> Result<Self> {
        Self::weighted(freqs, &vec![1.0; freqs.len()], spec)
    }

    /// Periodogram weights on the Fourier grid: the deterministic
    /// counterpart of the sampled objective. Grid points at seasonal zeros
    /// are dropped.
    pub fn grid(periodogram: &Periodogram, spec: &SeasonalSpec) -> Result<Self> {
        let s = spec.s as f64;
        let (freqs, weights): (Vec<f64>, Vec<f64>) = periodogram
            .freqs
            .iter()
            .zip(&periodogram.values)
            .filter(|(&l, _)| {
                let k = l * s / (2.0 * PI);
                (k - k.round()).abs() > 1e-9
            })
            .map(|(&l, &w)| (l, w))
            .unzip();
        Self::weighted(&freqs, &weights, spec)
    }

    pub fn weighted(freqs: &[f64], weights: &[f64], spec: &SeasonalSpec) -> Result<Self> {
        if freqs.is_empty() || freqs.len() != weights.len() {
            return Err(Error::InvalidArgument("need matching, nonempty frequency and weight lists".into()));
        }
        let weight_sum: f64 = weights.iter().sum();
        if !(weight_sum > 0.0) || weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::DegenerateSpectrum);
        }
        let degree = (spec.p + spec.s * spec.seasonal_p).max(spec.q + spec.s * spec.seasonal_q);
        let mut log_sin = Vec::with_capacity(freqs.len());
        let mut log_sin_seasonal = Vec::with_capacity(freqs.len());
        let mut cos = Vec::with_capacity(freqs.len() * (degree + 1));
        let mut sin = Vec::with_capacity(freqs.len() * (degree + 1));
        for &l in freqs {
            if !(l > 0.0 && l <= PI) {
                return Err(Error::InvalidArgument(format!("frequency {l} outside (0, pi]")));
            }
            // at a seasonal zero the log factor is -inf, so 1/h takes its
            // limit there: 0 for D > 0, +inf for D < 0
            let k = l * spec.s as f64 / (2.0 * PI);
            let a = (2.0 * (l / 2.0).sin()).abs().ln();
            let b = if (k - k.round()).abs() < 1e-12 {
                f64::NEG_INFINITY
            } else {
                (2.0 * (l * spec.s as f64 / 2.0).sin()).abs().ln()
            };
            log_sin.push(a);
            log_sin_seasonal.push(b);
            for k in 0..=degree {
                let (s, c) = (k as f64 * l).sin_cos();
                cos.push(c);
                sin.push(s);
            }
        }
        Ok(WhittleObjective { spec: *spec, weights: weights.to_vec(), weight_sum, log_sin, log_sin_seasonal, cos, sin, degree })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Objective at `zeta` without validating it.
    pub fn value(&self, zeta: &ArfismaParams) -> f64 {
        let ar = zeta.ar_polynomial(self.spec.s);
        let ma = zeta.ma_polynomial(self.spec.s);
        let row = self.degree + 1;
        let modulus = |coeffs: &[f64], j: usize| {
            let (c, s) = (&self.cos[j * row..], &self.sin[j * row..]);
            let (mut re, mut im) = (0.0, 0.0);
            for (k, &a) in coeffs.iter().enumerate() {
                re += a * c[k];
                im -= a * s[k];
            }
            re * re + im * im
        };
        let mut total = 0.0;
        for (j, &w) in self.weights.iter().enumerate() {
            let seasonal = if zeta.d_seasonal == 0.0 { 0.0 } else { zeta.d_seasonal * self.log_sin_seasonal[j] };
            let memory = (2.0 * (zeta.d * self.log_sin[j] + seasonal)).exp();
            total += w * memory * modulus(&ar, j) / modulus(&ma, j);
        }
        total / self.weight_sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::table1_model;

    #[test]
    fn white_noise_gives_one() {
        let zeta = ArfismaParams::memory_only(2.0, 0.0, 0.0);
        let spec = SeasonalSpec::memory_only(4);
        let freqs = [0.1, 0.5, 1.0, PI / 2.0, 3.0, PI];
        assert_eq!(whittle_objective(&freqs, &zeta, &spec).unwrap(), 1.0);
    }

    #[test]
    fn ar1_at_pi() {
        let zeta = ArfismaParams::memory_only(2.0, 0.0, 0.0).with_arma(vec![0.6], vec![]);
        let spec = zeta.spec(4);
        assert!((whittle_objective(&[PI], &zeta, &spec).unwrap() - 2.56).abs() < 1e-14);
        assert!((WhittleObjective::new(&[PI], &spec).unwrap().value(&zeta) - 2.56).abs() < 1e-14);
    }

    #[test]
    fn tabulated_matches_direct() {
        for i in 1..=4 {
            let (zeta, spec) = table1_model(i).unwrap();
            let freqs: Vec<f64> = (1..200).map(|k| k as f64 * 0.0157).collect();
            let direct = whittle_objective(&freqs, &zeta, &spec).unwrap();
            let fast = WhittleObjective::new(&freqs, &spec).unwrap().value(&zeta);
            assert!((direct - fast).abs() < 1e-12 * direct, "model {i}: {direct} vs {fast}");
        }
    }

    #[test]
    fn singular_frequencies_are_rejected() {
        let (zeta, spec) = table1_model(1).unwrap();
        assert!(matches!(whittle_objective(&[PI / 2.0], &zeta, &spec), Err(Error::SingularFrequency(_))));
        let limit = WhittleObjective::new(&[PI / 2.0], &spec).unwrap();
        assert_eq!(limit.value(&zeta), 0.0);
        assert_eq!(limit.value(&ArfismaParams { d_seasonal: -0.1, ..zeta.clone() }), f64::INFINITY);
        assert!(limit.value(&ArfismaParams { d_seasonal: 0.0, ..zeta.clone() }).is_finite());
        let p = Periodogram { freqs: vec![PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI], values: vec![1.0; 4] };
        assert_eq!(WhittleObjective::grid(&p, &spec).unwrap().len(), 2);
    }

    #[test]
    fn only_the_memory_bound_of_alpha_two_applies() {
        let spec = SeasonalSpec::memory_only(4);
        // |d + D| = 0.45 breaks the alpha = 1.6 bound but not the alpha = 2 one
        let zeta = ArfismaParams::memory_only(1.6, 0.25, 0.2);
        assert!(whittle_objective(&[1.0], &zeta, &spec).is_ok());
        let too_big = ArfismaParams::memory_only(2.0, 0.35, 0.2);
        assert!(whittle_objective(&[1.0], &too_big, &spec).is_err());
    }
}
