use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Share of failed replications above which an experiment is nonconforming.
pub const MAX_FAILURE_SHARE: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSummary {
    pub name: String,
    pub truth: f64,
    pub mean: f64,
    pub rmse: f64,
    pub mae: f64,
}

/// Mean, RMSE and MAE per coordinate over the successful replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub params: Vec<ParamSummary>,
    pub used: usize,
    pub failures: usize,
}

impl SummaryTable {
    pub fn failure_share(&self) -> f64 {
        let total = self.used + self.failures;
        if total == 0 {
            0.0
        } else {
            self.failures as f64 / total as f64
        }
    }

    pub fn is_conforming(&self) -> bool {
        self.used > 0 && self.failure_share() <= MAX_FAILURE_SHARE
    }

    pub fn get(&self, name: &str) -> Option<&ParamSummary> {
        self.params.iter().find(|p| p.name == name)
    }

    /// Summed per-coordinate mean squared error.
    pub fn total_mse(&self) -> f64 {
        self.params.iter().map(|p| p.rmse * p.rmse).sum()
    }
}

/// Summarizes `estimates` (each in `names` order) against `truth`; `None`
/// entries are failed replications and are only counted.
pub fn summarize(names: &[String], truth: &[f64], estimates: &[Option<Vec<f64>>]) -> Result<SummaryTable> {
    if names.len() != truth.len() {
        return Err(Error::InvalidArgument("names and truth differ in length".into()));
    }
    let ok: Vec<&Vec<f64>> = estimates.iter().flatten().collect();
    if ok.is_empty() {
        return Err(Error::InvalidArgument("no successful replications to summarize".into()));
    }
    if let Some(bad) = ok.iter().find(|e| e.len() != truth.len()) {
        return Err(Error::InvalidArgument(format!("estimate has {} coordinates, expected {}", bad.len(), truth.len())));
    }
    let n = ok.len() as f64;
    let params = names
        .iter()
        .zip(truth)
        .enumerate()
        .map(|(i, (name, &t))| {
            let (mut sum, mut sq, mut abs) = (0.0, 0.0, 0.0);
            for e in &ok {
                let err = e[i] - t;
                sum += e[i];
                sq += err * err;
                abs += err.abs();
            }
            ParamSummary { name: name.clone(), truth: t, mean: sum / n, rmse: (sq / n).sqrt(), mae: abs / n }
        })
        .collect();
    Ok(SummaryTable { params, used: ok.len(), failures: estimates.len() - ok.len() })
}
