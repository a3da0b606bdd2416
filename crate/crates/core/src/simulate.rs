//! Sample paths by truncated moving-average filtering,
//! `X_t = sum_{j=0}^{M} c_j Z_{t-j}`, of i.i.d. SαS innovations.
//!
//! The `T + M` innovations for indices `1-M..T` are drawn oldest first, so a
//! longer path from the same seed extends a shorter one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ma_coeffs, ArfismaParams, SeasonalSpec};
use crate::stable::sample_sas;

pub const DEFAULT_TRUNCATION: usize = 5000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Sample length `T`.
    pub length: usize,
    /// Truncation `M` of the moving average.
    pub truncation: usize,
    pub seed: u64,
    pub psi: ArfismaParams,
    pub spec: SeasonalSpec,
}

impl SimulationConfig {
    pub fn new(psi: ArfismaParams, spec: SeasonalSpec, length: usize, seed: u64) -> Self {
        SimulationConfig { length, truncation: DEFAULT_TRUNCATION, seed, psi, spec }
    }

    pub fn with_truncation(mut self, truncation: usize) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::InvalidArgument("sample length must be at least 1".into()));
        }
        if self.truncation == 0 {
            return Err(Error::InvalidArgument("truncation must be at least 1".into()));
        }
        Ok(())
    }

    /// Innovations `Z_{1-M}..Z_T` for this configuration.
    pub fn innovations(&self) -> Result<Vec<f64>> {
        sample_sas(self.psi.alpha, self.length + self.truncation, self.seed)
    }
}

pub fn simulate(config: &SimulationConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let c = ma_coeffs(&config.psi, &config.spec, config.truncation)?;
    let z = config.innovations()?;
    Ok(filter_innovations(&c, &z))
}

/// Applies `c_0..c_M` to innovations `Z_{1-M}..Z_T` (length `T + M`) and
/// returns `X_1..X_T`. Shorter filters use the most recent part of the
/// stream, so paths with different `M` can share innovations.
pub fn filter_innovations(coeffs: &[f64], innovations: &[f64]) -> Vec<f64> {
    let m = coeffs.len() - 1;
    assert!(innovations.len() > m, "need more than {m} innovations");
    let length = innovations.len() - m;
    // reversed filter turns each output into a contiguous dot product
    let rev: Vec<f64> = coeffs.iter().rev().copied().collect();
    (0..length)
        .into_par_iter()
        .map(|t| dot(&rev, &innovations[t..t + m + 1]))
        .collect()
}

/// Like [`simulate`] with caller-supplied innovations `Z_{1-M}..Z_T`; the
/// truncation is `innovations.len() - length`.
pub fn simulate_with_innovations(
    psi: &ArfismaParams,
    spec: &SeasonalSpec,
    innovations: &[f64],
    length: usize,
) -> Result<Vec<f64>> {
    if length == 0 || innovations.len() <= length {
        return Err(Error::InvalidArgument(format!(
            "{} innovations cannot drive a path of length {length} with a positive truncation",
            innovations.len()
        )));
    }
    let c = ma_coeffs(psi, spec, innovations.len() - length)?;
    Ok(filter_innovations(&c, innovations))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for i in 0..4 {
            acc[i] += x[i] * y[i];
        }
    }
    let mut total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        total += x * y;
    }
    total
}
