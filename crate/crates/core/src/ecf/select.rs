use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ArfismaParams;

/// Per-coordinate mean squared error of the replications for one `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSizeRow {
    pub m: usize,
    pub mse: Vec<f64>,
    pub total_mse: f64,
    pub used: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSizeSelection {
    pub m_opt: usize,
    pub rows: Vec<BlockSizeRow>,
}

/// Picks the block overlap minimizing the summed per-coordinate MSE
/// `(1/R) sum_j (psi_j^(m) - psi_0)^2` over `m_grid`.
///
/// `fit(m, rep)` simulates and estimates replication `rep` at overlap `m`;
/// failed replications are excluded and counted. Ties go to the smaller `m`.
pub fn select_block_size<F>(
    truth: &ArfismaParams,
    m_grid: &[usize],
    replications: usize,
    fit: F,
) -> Result<BlockSizeSelection>
where
    F: Fn(usize, usize) -> Result<ArfismaParams> + Sync,
{
    if m_grid.is_empty() {
        return Err(Error::InvalidArgument("m grid is empty".into()));
    }
    if replications == 0 {
        return Err(Error::InvalidArgument("need at least one replication".into()));
    }
    let truth_vec = truth.to_vec();
    let mut rows = Vec::with_capacity(m_grid.len());
    for &m in m_grid {
        let outcomes: Vec<Result<ArfismaParams>> = (0..replications).into_par_iter().map(|rep| fit(m, rep)).collect();
        let mut sq = vec![0.0; truth_vec.len()];
        let mut used = 0;
        let mut first_error = None;
        for outcome in outcomes {
            match outcome {
                Ok(est) => {
                    for (acc, (e, t)) in sq.iter_mut().zip(est.to_vec().iter().zip(&truth_vec)) {
                        *acc += (e - t).powi(2);
                    }
                    used += 1;
                }
                Err(e) => {
                    first_error.get_or_insert(e);
                }
            }
        }
        if used == 0 {
            return Err(first_error.expect("no successes means at least one failure"));
        }
        let mse: Vec<f64> = sq.iter().map(|s| s / used as f64).collect();
        let total_mse = mse.iter().sum();
        rows.push(BlockSizeRow { m, mse, total_mse, used, failures: replications - used });
    }
    let m_opt = rows
        .iter()
        .min_by(|a, b| a.total_mse.total_cmp(&b.total_mse).then(a.m.cmp(&b.m)))
        .map(|r| r.m)
        .expect("grid is nonempty");
    Ok(BlockSizeSelection { m_opt, rows })
}
