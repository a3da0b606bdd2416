use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fastmath::{abs_pow, abs_pow_sum};
use crate::model::{ma_coeffs, ArfismaParams, SeasonalSpec};

/// Number of trailing marginal terms used as the truncation-tail estimate.
pub const TAIL_TERMS: usize = 100;

/// The two exponents of the joint CF of `(X_1, ..., X_{m+1})`:
/// `c(r) = exp(-marginal - finite)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfExponents {
    /// `sum_{j>=0} |sum_l r_{l+1} c_{j+l}|^alpha`
    pub marginal: f64,
    /// `sum_{l=2}^{m+1} |sum_{h=0}^{m+1-l} r_{h+l} c_h|^alpha`
    pub finite: f64,
    /// The last [`TAIL_TERMS`] terms of `marginal`.
    pub tail: f64,
}

impl CfExponents {
    pub fn value(&self) -> f64 {
        (-(self.marginal + self.finite)).exp()
    }
}

/// Evaluates both exponents for the moving average with weights
/// `c_0..c_J` (zero beyond `J`). `scratch` is resized as needed.
pub fn cf_exponents(c: &[f64], alpha: f64, r: &[f64], scratch: &mut Vec<f64>) -> CfExponents {
    let j = c.len();
    scratch.clear();
    scratch.extend(c.iter().map(|v| r[0] * v));
    for (l, &rl) in r.iter().enumerate().skip(1).take_while(|&(l, _)| l < j) {
        for (s, v) in scratch.iter_mut().zip(&c[l..]) {
            *s += rl * v;
        }
    }
    let split = j.saturating_sub(TAIL_TERMS);
    let head = abs_pow_sum(&scratch[..split], alpha);
    let tail = abs_pow_sum(&scratch[split..], alpha);

    let m = r.len() - 1;
    let finite: f64 = (1..=m)
        .map(|l| abs_pow((0..=m - l).filter(|&h| h < j).map(|h| r[h + l] * c[h]).sum(), alpha))
        .sum();
    CfExponents { marginal: head + tail, finite, tail }
}

/// Joint CF of `m + 1` consecutive observations, `m = r.len() - 1`, for the
/// process truncated at lag `truncation`. With `tail_tolerance` set, fails
/// when the last [`TAIL_TERMS`] terms of the marginal sum exceed it.
pub fn joint_cf(
    psi: &ArfismaParams,
    spec: &SeasonalSpec,
    r: &[f64],
    truncation: usize,
    tail_tolerance: Option<f64>,
) -> Result<f64> {
    if r.is_empty() {
        return Err(Error::InvalidArgument("r must have at least one coordinate".into()));
    }
    if truncation < r.len() {
        return Err(Error::InvalidArgument(format!("truncation {truncation} must be at least m + 1 = {}", r.len())));
    }
    let c = ma_coeffs(psi, spec, truncation)?;
    let e = cf_exponents(&c, psi.alpha, r, &mut Vec::new());
    check_tail(&e, tail_tolerance)?;
    Ok(e.value())
}

pub(crate) fn check_tail(e: &CfExponents, tolerance: Option<f64>) -> Result<()> {
    match tolerance {
        Some(tol) if e.tail > tol => Err(Error::TruncationTail { tail: e.tail, tolerance: tol }),
        _ => Ok(()),
    }
}

/// `(1/n) sum_j exp(i r'Y_j)` over the `n = T - m` blocks
/// `Y_j = (X_j, ..., X_{j+m})`, `m = r.len() - 1`.
pub fn empirical_cf(series: &[f64], r: &[f64]) -> Result<Complex64> {
    let m = r.len().checked_sub(1).ok_or_else(|| Error::InvalidArgument("empty r".into()))?;
    if series.len() <= m {
        return Err(Error::SeriesTooShort { needed: m + 1, got: series.len() });
    }
    let n = series.len() - m;
    let mut re = 0.0;
    let mut im = 0.0;
    for block in series.windows(m + 1) {
        let phase: f64 = block.iter().zip(r).map(|(x, r)| x * r).sum();
        let (s, c) = phase.sin_cos();
        re += c;
        im += s;
    }
    Ok(Complex64::new(re / n as f64, im / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::table1_model;
    use crate::stable::sample_sas;

    #[test]
    fn unit_at_origin() {
        for i in 1..=4 {
            let (psi, spec) = table1_model(i).unwrap();
            assert_eq!(joint_cf(&psi, &spec, &[0.0, 0.0, 0.0], 500, None).unwrap(), 1.0);
        }
        assert_eq!(empirical_cf(&[0.3, -2.0, 5.0], &[0.0, 0.0]).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn white_noise_factorizes() {
        let psi = ArfismaParams::memory_only(1.6, 0.0, 0.0);
        let spec = SeasonalSpec::memory_only(4);
        for (r1, r2) in [(0.5, -0.3), (1.0, 1.0), (-0.7, 0.2)] {
            let v = joint_cf(&psi, &spec, &[r1, r2], 100, None).unwrap();
            let expect = (-f64::abs(r1).powf(1.6) - f64::abs(r2).powf(1.6)).exp();
            assert!((v - expect).abs() < 1e-13, "{v} vs {expect}");
        }
    }

    #[test]
    fn exponents_match_direct_sums() {
        let (psi, spec) = table1_model(4).unwrap();
        let c = ma_coeffs(&psi, &spec, 300).unwrap();
        let r = [0.4, -0.9, 0.3, 0.8];
        let e = cf_exponents(&c, 1.6, &r, &mut Vec::new());
        let cj = |j: usize| if j <= 300 { c[j] } else { 0.0 };
        let marginal: f64 = (0..=300)
            .map(|j| (0..4).map(|l| r[l] * cj(j + l)).sum::<f64>().abs().powf(1.6))
            .sum();
        let finite: f64 = (2..=4)
            .map(|l| (0..=4 - l).map(|h| r[h + l - 1] * c[h]).sum::<f64>().abs().powf(1.6))
            .sum();
        assert!((e.marginal - marginal).abs() < 1e-11 * marginal);
        assert!((e.finite - finite).abs() < 1e-11 * finite);
    }

    #[test]
    fn marginal_matches_series_sum() {
        let (psi, spec) = table1_model(1).unwrap();
        let c = ma_coeffs(&psi, &spec, 5000).unwrap();
        let direct: f64 = c.iter().map(|v| v.abs().powf(1.6)).sum();
        let v = joint_cf(&psi, &spec, &[1.0, 0.0], 5000, None).unwrap();
        assert!((v - (-direct).exp()).abs() < 1e-12);
    }

    #[test]
    fn tail_check_is_opt_in() {
        let (psi, spec) = table1_model(1).unwrap();
        let r = [1.0, 0.5];
        assert!(joint_cf(&psi, &spec, &r, 5000, None).is_ok());
        // the weights decay like j^(d + D - 1), far too slowly for a 1e-6 tail at J = 5000
        assert!(matches!(joint_cf(&psi, &spec, &r, 5000, Some(1e-6)), Err(Error::TruncationTail { .. })));
        assert!(joint_cf(&psi, &spec, &r, 1, None).is_err());
    }

    #[test]
    fn nonincreasing_along_rays() {
        let (psi, spec) = table1_model(2).unwrap();
        let r = [0.3, -0.6, 0.2];
        let mut last = 1.0;
        for k in 1..=20 {
            let t = k as f64 * 0.1;
            let v = joint_cf(&psi, &spec, &r.map(|x| x * t), 1000, None).unwrap();
            assert!(v <= last && v > 0.0);
            last = v;
        }
    }

    #[test]
    fn constant_blocks_have_unit_ecf() {
        let v = empirical_cf(&[1.0, 1.0, 1.0], &[std::f64::consts::PI, -std::f64::consts::PI]).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(empirical_cf(&[1.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn iid_ecf_is_product_of_marginals() {
        let x = sample_sas(1.6, 1_000_000, 8).unwrap();
        let v = empirical_cf(&x, &[1.0, 1.0]).unwrap();
        assert!((v - Complex64::new((-2.0f64).exp(), 0.0)).norm() < 0.01, "{v}");
    }
}
