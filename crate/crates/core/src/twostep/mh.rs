use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use super::periodogram::periodogram;
use super::WhittleConfig;
use crate::error::{Error, Result};
use crate::seed;

/// Acceptance rates outside this range are reported as a warning.
pub const ACCEPTANCE_RANGE: (f64, f64) = (0.05, 0.95);

#[derive(Debug, Clone, PartialEq)]
pub struct MhDraws {
    pub freqs: Vec<f64>,
    pub acceptance_rate: f64,
    pub warning: Option<String>,
}

fn reflect(mut x: f64) -> f64 {
    loop {
        if x < 0.0 {
            x = -x;
        } else if x > PI {
            x = 2.0 * PI - x;
        } else {
            return x;
        }
    }
}

/// Random-walk Metropolis–Hastings on `(0, pi]` for the unnormalized density
/// `target`, with Gaussian steps of standard deviation `proposal_scale`
/// reflected at both ends. Every step consumes one normal and one uniform,
/// whether or not the proposal is accepted.
pub fn mh_sample<F>(target: F, start: f64, config: &WhittleConfig) -> Result<MhDraws>
where
    F: Fn(f64) -> f64,
{
    config.validate()?;
    if !(start > 0.0 && start <= PI) {
        return Err(Error::InvalidArgument(format!("start {start} outside (0, pi]")));
    }
    let mut current = start;
    let mut density = target(current);
    if !(density > 0.0) {
        return Err(Error::InvalidArgument(format!("target is not positive at the start {start}")));
    }
    let mut rng = seed::rng(config.seed);
    let steps = config.burn_in + config.draws;
    let mut freqs = Vec::with_capacity(config.draws);
    let mut accepted = 0usize;
    for step in 0..steps {
        let z: f64 = rng.sample(StandardNormal);
        let u: f64 = rng.random();
        let proposal = reflect(current + config.proposal_scale * z);
        if proposal > 0.0 {
            let next = target(proposal);
            if u * density < next {
                current = proposal;
                density = next;
                accepted += 1;
            }
        }
        if step >= config.burn_in {
            freqs.push(current);
        }
    }
    let acceptance_rate = accepted as f64 / steps as f64;
    let (lo, hi) = ACCEPTANCE_RANGE;
    let warning = (!(lo..=hi).contains(&acceptance_rate)).then(|| {
        let msg = format!("MH acceptance rate {acceptance_rate:.3} outside [{lo}, {hi}]");
        log::warn!("{msg}");
        msg
    });
    Ok(MhDraws { freqs, acceptance_rate, warning })
}

/// Frequencies drawn with density proportional to the linearly interpolated
/// periodogram of `series`, started at the periodogram's peak.
pub fn mh_frequencies(series: &[f64], config: &WhittleConfig) -> Result<MhDraws> {
    let p = periodogram(series)?;
    if p.values.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateSpectrum);
    }
    mh_sample(|l| p.interpolate(l), p.argmax(), config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(draws: usize, seed: u64) -> WhittleConfig {
        WhittleConfig { draws, seed, ..Default::default() }
    }

    #[test]
    fn flat_target_is_uniform() {
        let draws = mh_sample(|_| 1.0, 1.0, &config(10_000, 3)).unwrap();
        assert_eq!(draws.freqs.len(), 10_000);
        let mut f = draws.freqs.clone();
        f.sort_by(f64::total_cmp);
        let n = f.len() as f64;
        let ks = f
            .iter()
            .enumerate()
            .map(|(i, &x)| ((i + 1) as f64 / n - x / PI).abs().max((x / PI - i as f64 / n).abs()))
            .fold(0.0, f64::max);
        assert!(ks < 0.05, "Kolmogorov distance {ks}");
        assert!(draws.warning.is_some(), "a flat target accepts every move");
    }

    #[test]
    fn concentrates_on_a_tone() {
        let x: Vec<f64> = (1..=1024).map(|t| (PI * t as f64 / 2.0).cos()).collect();
        let draws = mh_frequencies(&x, &config(5000, 5)).unwrap();
        let near = draws.freqs.iter().filter(|&&l| (l - PI / 2.0).abs() < 0.1).count();
        assert!(near as f64 >= 0.9 * draws.freqs.len() as f64, "{near}");
    }

    #[test]
    fn scale_invariant_and_reproducible() {
        let x: Vec<f64> = (0..500).map(|t| ((t * t) as f64 * 0.013).sin() + 0.1 * t as f64 % 3.0).collect();
        let scaled: Vec<f64> = x.iter().map(|v| 3.7 * v).collect();
        let a = mh_frequencies(&x, &config(3000, 9)).unwrap();
        assert_eq!(a, mh_frequencies(&x, &config(3000, 9)).unwrap());
        assert_eq!(a.freqs, mh_frequencies(&scaled, &config(3000, 9)).unwrap().freqs);
        let flipped: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(a.freqs, mh_frequencies(&flipped, &config(3000, 9)).unwrap().freqs);
    }

    #[test]
    fn degenerate_and_bad_inputs() {
        assert_eq!(mh_frequencies(&[0.0; 128], &config(10, 1)), Err(Error::DegenerateSpectrum));
        assert!(mh_sample(|_| 1.0, 0.0, &config(10, 1)).is_err());
        assert!(mh_sample(|_| 0.0, 1.0, &config(10, 1)).is_err());
        assert!(mh_sample(|_| 1.0, 1.0, &WhittleConfig { proposal_scale: 0.0, ..config(10, 1) }).is_err());
    }

    #[test]
    fn reflection_stays_inside() {
        for x in [-0.3, -7.0, 3.5, 10.0, 0.5] {
            let r = reflect(x);
            assert!((0.0..=PI).contains(&r), "{x} -> {r}");
        }
    }
}
