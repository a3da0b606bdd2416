use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// `I_T(lambda_k) = |sum_t X_t e^{-i t lambda_k}|^2 / (2 pi T)` on the
/// Fourier frequencies `lambda_k = 2 pi k / T`, `k = 1..floor(T/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    pub freqs: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn periodogram(series: &[f64]) -> Result<Periodogram> {
    let t = series.len();
    if t < 2 {
        return Err(Error::SeriesTooShort { needed: 2, got: t });
    }
    let mut buf: Vec<Complex64> = series.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(t).process(&mut buf);
    let norm = 2.0 * PI * t as f64;
    let (freqs, values) = (1..=t / 2)
        .map(|k| (2.0 * PI * k as f64 / t as f64, buf[k].norm_sqr() / norm))
        .unzip();
    Ok(Periodogram { freqs, values })
}

impl Periodogram {
    /// Linear interpolation between Fourier frequencies, held constant below
    /// the first and above the last one.
    pub fn interpolate(&self, lambda: f64) -> f64 {
        let n = self.freqs.len();
        let step = self.freqs[0];
        let pos = lambda / step - 1.0;
        if pos <= 0.0 {
            return self.values[0];
        }
        let k = pos.floor() as usize;
        if k + 1 >= n {
            return self.values[n - 1];
        }
        let w = pos - k as f64;
        (1.0 - w) * self.values[k] + w * self.values[k + 1]
    }

    /// Fourier frequency with the largest ordinate.
    pub fn argmax(&self) -> f64 {
        let k = (0..self.values.len()).max_by(|&a, &b| self.values[a].total_cmp(&self.values[b])).expect("nonempty");
        self.freqs[k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stable::sample_sas;

    #[test]
    fn zeros_and_short_input() {
        let p = periodogram(&[0.0; 16]).unwrap();
        assert_eq!(p.freqs.len(), 8);
        assert!(p.values.iter().all(|&v| v == 0.0));
        assert!(periodogram(&[1.0]).is_err());
    }

    #[test]
    fn pure_tone() {
        let x: Vec<f64> = (1..=64).map(|t| (PI * t as f64 / 2.0).cos()).collect();
        let p = periodogram(&x).unwrap();
        assert!((p.argmax() - PI / 2.0).abs() < 1e-12);
        let total: f64 = p.values.iter().sum();
        let at = p.values[15];
        assert!(at / total > 0.999);
    }

    #[test]
    fn matches_direct_dft() {
        let x = [0.3, -1.2, 2.0, 0.7, -0.4, 1.1, 0.0];
        let p = periodogram(&x).unwrap();
        for (k, (&l, &v)) in p.freqs.iter().zip(&p.values).enumerate() {
            let s: Complex64 = x
                .iter()
                .enumerate()
                .map(|(t, &xt)| xt * Complex64::from_polar(1.0, -((t + 1) as f64) * l))
                .sum();
            assert!((v - s.norm_sqr() / (2.0 * PI * 7.0)).abs() < 1e-13, "k = {}", k + 1);
        }
    }

    #[test]
    fn flat_for_gaussian_noise() {
        // alpha = 2 innovations have variance 2, so the flat level is 2 / (2 pi)
        let x = sample_sas(2.0, 1 << 14, 4).unwrap();
        let p = periodogram(&x).unwrap();
        let mean = p.values.iter().sum::<f64>() / p.values.len() as f64;
        let level = 1.0 / PI;
        assert!((mean - level).abs() < 0.1 * level, "{mean}");
        let unit: Vec<f64> = x.iter().map(|v| v * std::f64::consts::FRAC_1_SQRT_2).collect();
        let p = periodogram(&unit).unwrap();
        let mean = p.values.iter().sum::<f64>() / p.values.len() as f64;
        assert!((mean - 0.5 / PI).abs() < 0.05 / PI, "{mean}");
    }

    #[test]
    fn interpolation() {
        let p = Periodogram { freqs: vec![1.0, 2.0, 3.0], values: vec![4.0, 2.0, 6.0] };
        assert_eq!(p.interpolate(0.2), 4.0);
        assert_eq!(p.interpolate(1.5), 3.0);
        assert_eq!(p.interpolate(2.75), 5.0);
        assert_eq!(p.interpolate(3.1), 6.0);
    }
}
