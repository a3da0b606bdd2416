use serde::{Deserialize, Serialize};

use crate::model::ArfismaParams;

/// Result of one estimation run, shared by both estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub method: String,
    pub psi_hat: ArfismaParams,
    /// Objective at the optimum: the ECF distance, or the Whittle average
    /// for the two-step method.
    pub objective: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub wall_time_secs: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}
