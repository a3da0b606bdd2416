use crate::error::{Error, Result};
use crate::optim;

use super::density::{QuadratureSettings, SasDensity};

/// Positive floor applied to density values before taking logs in the
/// clamped likelihood. Far-tail samples can fall where the quadrature
/// estimate rounds to zero.
pub const DENSITY_FLOOR: f64 = 1e-300;

/// Lowest tail index searched by default.
pub const ALPHA_SEARCH_LOWER: f64 = 1.0 + 1e-3;

/// Result of the tail-index MLE.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaFit {
    pub alpha: f64,
    pub log_likelihood: f64,
    pub evaluations: usize,
    /// The maximum sits on the upper end of the search interval (the
    /// Gaussian boundary when that is 2).
    pub at_upper_bound: bool,
}

fn check_inputs(samples: &[f64], alpha: f64) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(())
}

/// `sum_t log f(z_t; alpha)`. Errors with [`Error::DensityUnderflow`] on the
/// first sample whose density evaluates to zero.
pub fn alpha_log_likelihood(samples: &[f64], alpha: f64) -> Result<f64> {
    check_inputs(samples, alpha)?;
    let dens = SasDensity::new(alpha, QuadratureSettings::default())?;
    let mut total = 0.0;
    for &z in samples {
        let f = dens.eval(z)?;
        if !(f > 0.0) {
            return Err(Error::DensityUnderflow(z));
        }
        total += f.ln();
    }
    Ok(total)
}

/// Same as [`alpha_log_likelihood`] but with densities floored at
/// [`DENSITY_FLOOR`].
pub fn alpha_log_likelihood_clamped(samples: &[f64], alpha: f64) -> Result<f64> {
    check_inputs(samples, alpha)?;
    let dens = SasDensity::new(alpha, QuadratureSettings::default())?;
    let mut total = 0.0;
    for &z in samples {
        total += dens.eval(z)?.max(DENSITY_FLOOR).ln();
    }
    Ok(total)
}

/// Maximizes the clamped log-likelihood over `bounds` by Brent's method to
/// tolerance `1e-4`. A maximum on the upper bound is accepted; one on the
/// lower bound is reported as [`Error::NoInteriorMaximum`].
pub fn fit_alpha_mle(samples: &[f64], bounds: (f64, f64)) -> Result<AlphaFit> {
    const TOL: f64 = 1e-4;
    let (lower, upper) = bounds;
    if !(lower > 1.0 && upper <= 2.0 && lower < upper) {
        return Err(Error::InvalidArgument(format!("alpha bounds ({lower}, {upper}) not inside (1, 2]")));
    }
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty sample".into()));
    }
    let mut failure = None;
    let found = optim::brent(
        |a| match alpha_log_likelihood_clamped(samples, a) {
            Ok(l) => -l,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        lower,
        upper,
        TOL,
        200,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let alpha = found.x[0];
    if alpha - lower <= TOL {
        return Err(Error::NoInteriorMaximum { lower, upper });
    }
    Ok(AlphaFit {
        alpha,
        log_likelihood: -found.value,
        evaluations: found.evaluations,
        at_upper_bound: upper - alpha <= TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stable::sample_sas;

    const LOG_GAUSS_AT_ZERO: f64 = -1.265_512_123_484_645_4;

    #[test]
    fn single_gaussian_point() {
        let l = alpha_log_likelihood(&[0.0], 2.0).unwrap();
        assert!((l - LOG_GAUSS_AT_ZERO).abs() < 1e-10);
        let l2 = alpha_log_likelihood(&[0.0, 0.0], 2.0).unwrap();
        assert!((l2 - 2.0 * LOG_GAUSS_AT_ZERO).abs() < 1e-10);
    }

    #[test]
    fn strict_likelihood_flags_underflow_clamped_does_not() {
        // far enough out that the Gaussian density is exactly zero
        let xs = [0.0, 80.0];
        assert!(matches!(alpha_log_likelihood(&xs, 2.0), Err(Error::DensityUnderflow(_))));
        let l = alpha_log_likelihood_clamped(&xs, 2.0).unwrap();
        assert!((l - (LOG_GAUSS_AT_ZERO + DENSITY_FLOOR.ln())).abs() < 1e-9);
    }

    #[test]
    fn likelihood_peaks_near_truth() {
        let xs = sample_sas(1.6, 10_000, 31).unwrap();
        let l = |a| alpha_log_likelihood(&xs, a).unwrap();
        assert!(l(1.6) > l(1.2));
        // far-tail draws have Gaussian densities below the f64 range
        assert!(alpha_log_likelihood(&xs, 2.0).is_err());
        assert!(l(1.6) > alpha_log_likelihood_clamped(&xs, 2.0).unwrap());
    }

    #[test]
    fn recovers_alpha_on_moderate_samples() {
        for (alpha, seed) in [(1.3, 41), (1.6, 42), (1.9, 43)] {
            let xs = sample_sas(alpha, 20_000, seed).unwrap();
            let fit = fit_alpha_mle(&xs, (ALPHA_SEARCH_LOWER, 2.0)).unwrap();
            assert!((fit.alpha - alpha).abs() <= 0.05, "alpha {alpha}: {}", fit.alpha);
        }
    }

    #[test]
    fn gaussian_sample_hits_upper_bound_region() {
        let xs = sample_sas(2.0, 20_000, 44).unwrap();
        let fit = fit_alpha_mle(&xs, (ALPHA_SEARCH_LOWER, 2.0)).unwrap();
        assert!(fit.alpha >= 1.95 && fit.alpha <= 2.0, "{}", fit.alpha);
    }

    #[test]
    fn lower_bound_maximum_is_an_error() {
        let xs = sample_sas(1.2, 5_000, 45).unwrap();
        assert!(matches!(fit_alpha_mle(&xs, (1.7, 2.0)), Err(Error::NoInteriorMaximum { .. })));
    }

    #[test]
    fn rejects_bad_bounds_and_empty_input() {
        assert!(fit_alpha_mle(&[0.1], (0.9, 2.0)).is_err());
        assert!(fit_alpha_mle(&[], (1.1, 2.0)).is_err());
        assert!(alpha_log_likelihood(&[], 1.5).is_err());
    }
}
